// learner_core.hpp
#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bandits/distribution.hpp"

namespace bandits {

// Sample-count scales. The theory constants (1000 and 100000) make every
// phase longer than any desk-scale horizon, so the defaults are small; the
// paper preset keeps the original values.
struct LearnerConfig {
    std::int64_t T = 0;
    double c_init = 4.0;
    double c_explore = 4.0;
    double c_estimate = 64.0;

    static LearnerConfig desk(std::int64_t T) { return LearnerConfig{T, 4.0, 4.0, 64.0}; }
    static LearnerConfig paper(std::int64_t T) {
        return LearnerConfig{T, 1000.0, 1000.0, 100000.0};
    }
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct ConfidenceIntervals {
    std::vector<Interval> bounds;

    int size() const { return static_cast<int>(bounds.size()); }
    // True when other[i] is contained in bounds[i] for every i.
    bool nests(const ConfidenceIntervals& other) const;
};

// Empirical CDFs plus the sup-error budget they were built to meet. The
// generation counter identifies the phase whose rounds produced the samples;
// consumers that require fresh estimates check it.
struct CdfEstimates {
    std::vector<EmpiricalCdf> fhat;
    double product_error_budget = 0.0;
    int generation = 0;
};

struct PhaseReport {
    double epsilon = 0.0;
    std::int64_t rounds_used = 0;
    ConfidenceIntervals refined;
    std::vector<std::pair<double, double>> delta_hat_trace;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
    bool degenerate() const { return has_flag("degenerate"); }
    bool truncated() const { return has_flag("truncated"); }
};

// ceil(c * n^2 * sqrt(T) * ln T): initialization samples per arm.
std::int64_t init_sample_count(std::int64_t T, double c_init, int n = 1);
// ceil(c * ln T / eps^2): exploration rounds per arm inside one phase.
std::int64_t explore_round_count(std::int64_t T, double c_explore, double epsilon);
// ceil(c * n^2 * ln T / eps): per-phase distribution-estimate samples.
std::int64_t estimate_sample_count(std::int64_t T, double c_estimate, double epsilon, int n);

// Refinement of a nondecreasing affine bound estimate delta(tau) =
// slope*tau + intercept over `box`: keeps {tau : -lower_cut <= delta(tau) <=
// upper_cut}. When the kept set is empty the result collapses to the endpoint
// nearest the zero crossing and is marked degenerate.
struct AffineRefinement {
    Interval refined;
    bool degenerate = false;
};

AffineRefinement refine_with_affine_bound(double slope, double intercept, const Interval& box,
                                          double lower_cut, double upper_cut);

} // namespace bandits
