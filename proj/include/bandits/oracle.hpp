// oracle.hpp
#pragma once
#include <cstdint>
#include <vector>

#include "bandits/distribution.hpp"
#include "bandits/policy.hpp"

namespace bandits {

// Backward threshold DP for the selection game. opt_values[i] is the expected
// reward of optimal play over boxes i..n-1; the optimal threshold for box
// i < n-1 is the value of continuing, opt_values[i+1].
struct ProphetOpt {
    std::vector<double> opt_values;      // size n
    std::vector<double> opt_thresholds;  // size n-1

    double value() const { return opt_values.front(); }
    ProphetAction action() const { return ProphetAction{opt_thresholds}; }
};

// Exact expected reward of playing the given thresholds once: box i is taken
// when X_i strictly exceeds thresholds[i], the last box whenever reached.
double prophet_expected_reward(const ProphetInstance& inst, const ProphetAction& action);

ProphetOpt prophet_opt(const ProphetInstance& inst);

// Index policy: sigmas[i] solves gain_i(sigma, c_i) = 0; boxes are inspected
// in nonincreasing sigma order (ties: lower box id first) with tau_i = sigma_i.
struct WeitzmanPolicy {
    std::vector<double> sigmas;
    PandoraPolicy policy;
};

WeitzmanPolicy weitzman(const PandoraInstance& inst);

struct UtilityEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 when exact
    bool exact = true;
};

// Exact expected utility by enumeration over the joint support. Requires
// atom-only boxes and at most kExactOutcomeCap joint outcomes; throws a
// capability error otherwise.
inline constexpr std::int64_t kExactOutcomeCap = 1000000;
double pandora_expected_utility_exact(const PandoraInstance& inst, const PandoraPolicy& policy);

// Exact when the instance qualifies, Monte Carlo with a standard error
// otherwise.
UtilityEstimate pandora_expected_utility(const PandoraInstance& inst, const PandoraPolicy& policy,
                                         std::uint64_t seed = 12345,
                                         std::int64_t mc_rounds = 200000);

// Exact expected utility of the 2-box fixed-order policy (box 0 first, always
// opened; stop before box 1 when X_0 >= tau), valid for any support:
//   R(tau) = -c_0 + E[X_0] + integral over {x < tau} of gain_1(x) dF_0(x).
double pandora2_fixed_order_reward(const PandoraInstance& inst, double tau);

// One-round regret of the fixed-order policy against the best fixed-order
// threshold sigma_1 (which is the Weitzman optimum whenever sigma_0 >= sigma_1).
double pandora2_fixed_order_regret(const PandoraInstance& inst, double tau);

// F_{pi,i}(x): probability that every value inspected before `box` lies
// strictly below x, i.e. the product of left-limit CDFs of the earlier boxes.
double reach_probability(const PandoraInstance& inst, const PandoraPolicy& policy, int box,
                         double x);

// Expected utility change from playing i directly before j instead of j
// before i, all else equal. Requires the two boxes adjacent in the policy
// with equal thresholds tau; positive means i-before-j is better:
//   F_{pi,.}(tau) * (g_i(tau)(1 - F_j^-(tau)) - g_j(tau)(1 - F_i^-(tau))).
double swap_difference(const PandoraInstance& inst, const PandoraPolicy& policy, int box_i,
                       int box_j);

double one_round_regret(const ProphetInstance& inst, const ProphetAction& action);
double one_round_regret(const ProphetInstance& inst, const ProphetOpt& opt,
                        const ProphetAction& action);
// Atom-only instances only (regret must be exact); throws otherwise.
double one_round_regret(const PandoraInstance& inst, const PandoraPolicy& policy);

} // namespace bandits
