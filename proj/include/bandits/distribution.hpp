// distribution.hpp
#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bandits/rng.hpp"

namespace bandits {

struct Atom {
    double x = 0.0;
    double mass = 0.0;
};

// Uniform density on [lo, hi).
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    double density = 0.0;
};

// Law on [0,1] given by point masses plus piecewise-constant density pieces.
// Everything downstream (oracles, reservation values, regret accounting)
// queries this class for closed-form quantities; nothing iterates numerically.
class BoundedDistribution {
public:
    BoundedDistribution(std::vector<Atom> atoms, std::vector<Segment> segments);

    static BoundedDistribution point(double x);
    static BoundedDistribution uniform(double lo, double hi);
    static BoundedDistribution from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Segment>& segments() const { return segments_; }
    bool atoms_only() const { return segments_.empty(); }

    double cdf(double x) const;       // P(X <= x); throws std::domain_error off [0,1]
    double cdf_left(double x) const;  // P(X < x); same domain rule
    double mean() const { return mean_; }

    // E[X * 1{X >= tau}]; with include_tau = false the comparison is strict.
    double partial_mean_above(double tau, bool include_tau = true) const;

    // Integral of the CDF over [a, b] (a <= b). F is 0 below 0 and 1 above 1.
    double integral_cdf(double a, double b) const;

    // gain(v, c) = -c + E[max(X - v, 0)], the expected improvement over a
    // held value v after paying c to open this box.
    double gain(double v, double cost) const;

    // Smallest sigma in [0,1] with gain(sigma, cost) = 0, found by analytic
    // per-piece root extraction (gain is piecewise quadratic, nonincreasing).
    // Requires 0 <= cost <= mean(); throws otherwise.
    double reservation_value(double cost) const;

    double sample(double u01) const;  // inverse-CDF transform
    double sample(RngStream& rng) const { return sample(rng.next_double()); }

    // Sorted structural boundaries (atom locations, segment endpoints) within
    // [0,1], with 0 and 1 always present. Exact integration of expressions in
    // F reduces to walks over these.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // Density of the segment covering x (right-continuous), 0 elsewhere.
    double density_at(double x) const;

    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }

    // Law of factor * X. Used by the utility-range normalization of the
    // n-box inspection game (factor = 1/(2n)).
    BoundedDistribution scaled(double factor) const;

private:
    std::vector<Atom> atoms_;        // sorted by x, unique locations
    std::vector<Segment> segments_;  // sorted, non-overlapping
    std::vector<double> breakpoints_;
    double mean_ = 0.0;
    double support_min_ = 0.0;
    double support_max_ = 0.0;
};

// Step CDF of observed samples with exact integral queries (prefix sums).
// `generation` tags which estimation phase produced the samples so that
// stages requiring fresh draws can reject stale estimates.
class EmpiricalCdf {
public:
    EmpiricalCdf() = default;
    explicit EmpiricalCdf(std::vector<double> samples, int generation = 0);

    std::int64_t count() const { return static_cast<std::int64_t>(sorted_.size()); }
    int generation() const { return generation_; }

    double value(double x) const;                 // F_hat(x) = #{s <= x} / N
    double integral(double a, double b) const;    // int_a^b F_hat
    double integral_minus_one(double a, double b) const { return integral(a, b) - (b - a); }

    const std::vector<double>& sorted_samples() const { return sorted_; }

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;  // prefix_[k] = sum of first k sorted samples
    int generation_ = 0;
};

struct ProphetInstance {
    std::vector<BoundedDistribution> boxes;
    int n() const { return static_cast<int>(boxes.size()); }
};

struct PandoraInstance {
    std::vector<BoundedDistribution> boxes;
    std::vector<double> costs;
    // Multiplier already applied to values and costs (1.0 = unscaled).
    double scale = 1.0;

    int n() const { return static_cast<int>(boxes.size()); }
    bool is_scaled() const { return scale != 1.0; }
    // Returns the instance with values and costs multiplied by 1/(2n), so a
    // round's utility always falls in [-1/2, 1/2].
    PandoraInstance normalized() const;
};

// Text format, one box per line (sections optional, order fixed):
//   atoms= loc:mass,loc:mass ; segments= lo:hi:density ; cost= c
// '#' starts a comment; blank lines are skipped. Total mass must be 1 within
// 1e-12. Prophet boxes must not carry costs; inspection boxes must.
BoundedDistribution parse_distribution_line(const std::string& line,
                                            std::optional<double>* cost_out);
ProphetInstance parse_prophet_instance(const std::string& text);
PandoraInstance parse_pandora_instance(const std::string& text);

ProphetInstance load_prophet_instance_file(const std::string& path);
PandoraInstance load_pandora_instance_file(const std::string& path);

std::string format_distribution_line(const BoundedDistribution& d,
                                     std::optional<double> cost = std::nullopt);

} // namespace bandits
