// learner_core.cpp
#include "bandits/learner_core.hpp"

#include <cmath>
#include <stdexcept>

namespace bandits {

bool ConfidenceIntervals::nests(const ConfidenceIntervals& other) const {
    if (bounds.size() != other.bounds.size()) return false;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (other.bounds[i].lo < bounds[i].lo || other.bounds[i].hi > bounds[i].hi) return false;
    }
    return true;
}

bool PhaseReport::has_flag(const std::string& f) const {
    for (const std::string& g : flags) {
        if (g == f || g.rfind(f + ":", 0) == 0) return true;
    }
    return false;
}

namespace {

std::int64_t checked_ceil(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
    const double c = std::ceil(x);
    if (c > 9.0e18) throw std::invalid_argument(std::string(what) + " overflows the round counter");
    return static_cast<std::int64_t>(c);
}

} // namespace

std::int64_t init_sample_count(std::int64_t T, double c_init, int n) {
    if (T < 4) throw std::invalid_argument("horizon too small to initialize");
    if (n < 1) throw std::invalid_argument("problem size must be >= 1");
    const double Td = static_cast<double>(T);
    return checked_ceil(c_init * n * n * std::sqrt(Td) * std::log(Td), "init sample count");
}

std::int64_t explore_round_count(std::int64_t T, double c_explore, double epsilon) {
    if (T < 4) throw std::invalid_argument("horizon too small for an exploration phase");
    if (!(epsilon > 0.0)) throw std::invalid_argument("accuracy must be positive");
    const double Td = static_cast<double>(T);
    return checked_ceil(c_explore * std::log(Td) / (epsilon * epsilon), "explore round count");
}

std::int64_t estimate_sample_count(std::int64_t T, double c_estimate, double epsilon, int n) {
    if (T < 4) throw std::invalid_argument("horizon too small for estimate samples");
    if (!(epsilon > 0.0)) throw std::invalid_argument("accuracy must be positive");
    if (n < 1) throw std::invalid_argument("problem size must be >= 1");
    const double Td = static_cast<double>(T);
    return checked_ceil(c_estimate * n * n * std::log(Td) / epsilon, "estimate sample count");
}

AffineRefinement refine_with_affine_bound(double slope, double intercept, const Interval& box,
                                          double lower_cut, double upper_cut) {
    if (slope < 0.0) throw std::invalid_argument("bound estimate must be nondecreasing");
    if (lower_cut < 0.0 || upper_cut < 0.0) throw std::invalid_argument("cuts must be nonnegative");
    if (box.lo > box.hi) throw std::invalid_argument("empty interval");

    const auto delta = [&](double t) { return slope * t + intercept; };

    // delta is nondecreasing, so min{tau : delta >= -a} exists iff
    // delta(hi) >= -a, and max{tau : delta <= b} exists iff delta(lo) <= b.
    if (delta(box.hi) < -lower_cut) return {{box.hi, box.hi}, true};
    if (delta(box.lo) > upper_cut) return {{box.lo, box.lo}, true};

    Interval out = box;
    if (slope > 0.0) {
        if (delta(box.lo) < -lower_cut) out.lo = (-lower_cut - intercept) / slope;
        if (delta(box.hi) > upper_cut) out.hi = (upper_cut - intercept) / slope;
        if (out.lo < box.lo) out.lo = box.lo;
        if (out.hi > box.hi) out.hi = box.hi;
        if (out.lo > out.hi) out.lo = out.hi;  // numeric guard, cuts overlap analytically
    }
    return {out, false};
}

} // namespace bandits
