// prophet_learner.hpp
#pragma once
#include <cstdint>

#include "bandits/environment.hpp"
#include "bandits/learner_core.hpp"

namespace bandits {

// Initialization for the 2-variable selection game: samples the first box by
// accepting everything and the second by skipping the first, then centers an
// interval on the second box's empirical mean. The interval radius is the
// Hoeffding radius at confidence 2*T^{-c_init/2}, which is at most
// (1/2)*T^{-1/4} at the prescribed sample count, so the width meets the
// T^{-1/4} budget the shrinking phases assume.
struct ProphetInit2 {
    CdfEstimates cdfs;  // one estimate, the first box
    Interval interval;  // contains E[X_2] with high probability
    double radius = 0.0;
    std::int64_t rounds_used = 0;
};

ProphetInit2 init2(const ProphetPlayFn& play, std::int64_t T, double c_init);

// One shrinking phase for n = 2. Plays the interval endpoints, forms the
// affine bound estimate
//   delta(tau) = F1(u)(tau-u) - F1(l)(tau-l) + int_l^u F1 - (Ru - Rl),
// and keeps {tau : |delta(tau)| <= 5*epsilon}. Passing max_rounds >= 0 caps
// the rounds played; a capped phase is flagged "truncated" and, if an arm got
// no rounds at all, returns the interval unchanged.
PhaseReport isa2(const ProphetPlayFn& play, std::int64_t T, const Interval& interval,
                 const EmpiricalCdf& fhat1, double epsilon, double c_explore,
                 std::int64_t max_rounds = -1);

// Initialization for general n: harvests per-box sample sets with skip/accept
// threshold patterns, then builds the intervals backwards, centering interval
// i on the average reward of playing (skip, ..., skip, l_{i+1}, ...). The
// upper slack grows as (2n-2i-1) because interval i must also cover the
// optimum continuation value, which the averages only track up to the widths
// of the later intervals.
struct ProphetInitGeneral {
    CdfEstimates cdfs;              // n estimates
    ConfidenceIntervals intervals;  // n-1 intervals
    std::int64_t rounds_used = 0;
};

ProphetInitGeneral init_general(const ProphetPlayFn& play, int n, std::int64_t T, double c_init);

// One shrinking phase for general n, processing positions from n-1 down to 1.
// Position i plays (u_1, ..., u_{i-1}, l_i or u_i, l'_{i+1}, ...), where the
// later entries are this phase's already-refined lower bounds, and refines
// with cuts [-epsilon, (2n-2i-1)*epsilon].
PhaseReport isa_general(const ProphetPlayFn& play, int n, std::int64_t T,
                        const ConfidenceIntervals& intervals, const CdfEstimates& cdfs,
                        double epsilon, double c_explore, std::int64_t max_rounds = -1);

} // namespace bandits
