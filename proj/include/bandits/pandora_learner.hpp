// pandora_learner.hpp
#pragma once
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bandits/distribution.hpp"
#include "bandits/environment.hpp"
#include "bandits/learner_core.hpp"
#include "bandits/policy.hpp"

namespace bandits {

// Confidence state for the inspection game: one interval per box bracketing
// its reservation value, plus the resolved order relations. A pair (i, j)
// records that box i's reservation value is known to exceed box j's. The
// relation set is kept transitively closed and acyclic, and every pair
// (i, j) keeps interval dominance: u_i >= u_j and l_i >= l_j.
struct ConstraintGroup {
    ConfidenceIntervals intervals;
    std::set<std::pair<int, int>> order_constraints;

    int n() const { return intervals.size(); }
    bool has(int i, int j) const {
        return order_constraints.count({i, j}) != 0;
    }

    // Inserts (i, j), closes transitively, then tightens intervals along
    // every relation (u_j <- min{u_i, u_j}, l_i <- max{l_i, l_j}) until
    // stable. Throws std::logic_error when the addition would create a cycle
    // or the tightening inverts an interval; both mean earlier statistics
    // were wrong and the experiment must be aborted.
    void add_constraint(int i, int j);
};

// Throws std::invalid_argument naming the first structural violation:
// interval outside [0,1] or inverted, relation endpoints out of range,
// missing transitive closure, a cycle, or a relation without dominance.
void require_valid_group(const ConstraintGroup& group);

// Diagnostic validity check of a policy against the group: every threshold
// inside its box's interval, order relations respected, thresholds
// nonincreasing along the order. Returns one message per violation, empty
// when the policy is valid. Never throws.
std::vector<std::string> validate_policy(const ConstraintGroup& group, const PandoraPolicy& policy);

// max over subsets B of prod_{i in B} b_i - prod_{i in B} a_i, subject to
// implications: a pair (i, j) means i in B forces j in B. The implication
// digraph may contain cycles.
struct ProblemAInstance {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::pair<int, int>> implications;

    int n() const { return static_cast<int>(a.size()); }
};

struct ProblemAResult {
    std::vector<int> best_set;  // ascending indices
    double value = 0.0;
};

// Exhaustive search over implication-feasible subsets, guarded to n <= 20
// (std::runtime_error beyond). Ties keep the first maximizer in mask order,
// so the empty set wins when everything scores zero.
ProblemAResult problem_a_exact(const ProblemAInstance& inst);

// Scores the reachability closure of each element in the implication digraph
// and returns the best one. Runs in polynomial time; the winner is within a
// factor n of the exact optimum and never exceeds it.
ProblemAResult problem_a_approx(const ProblemAInstance& inst);

enum class SearchMode { kExact, kApprox };

// Arm pair for shrinking box `box`: a fixed order with thresholds for every
// other box, plus two admissible thresholds lo <= hi for `box` chosen to
// maximize the estimated probability gap of reaching `box` between the two,
// reach_gap = prod_{k in front} F_k(hi) - prod_{k in front} F_k(lo).
// policy.thresholds[box] is preset to lo; the hi arm substitutes hi. The
// policy is valid for the group at both endpoints.
struct MoveBoundResult {
    PandoraPolicy policy;
    int box = 0;
    double lo = 0.0;
    double hi = 0.0;
    double reach_gap = 0.0;
    bool degenerate = false;  // no admissible front set, reach_gap 0
};

// Exact mode enumerates every front set compatible with the order relations
// (predecessors of `box` forced in, successors forced out, fronts closed
// under predecessors) and is guarded to n <= 16. Approx mode tries the
// O(n^2) candidate endpoint pairs drawn from interval endpoints and solves
// each induced subset-product problem with problem_a_approx; its reach_gap
// is within a factor n of the exact one.
MoveBoundResult find_movebound(const ConstraintGroup& group, int box, const CdfEstimates& cdfs,
                               SearchMode mode);

// One interval-shrinking pass for `box` at accuracy epsilon. Finds the arm
// pair via find_movebound, plays the hi arm then the lo arm for
// explore_round_count(T, c_explore, epsilon) rounds each, and keeps the
// thresholds whose estimated penalty delta_hat stays within epsilon:
//   D_hat(tau) = P(hi) * int_tau^hi (F_box - 1) + P(lo) * int_lo^tau (F_box - 1)
//              - int_lo^hi P(x) (F_box(x) - 1) dx,   P = front CDF product,
//   delta_hat(tau) = D_hat(tau) - (R_hat(hi) - R_hat(lo)).
// delta_hat is piecewise linear and nondecreasing, so the kept set is an
// interval. The result's refined field carries all n intervals with entry
// `box` replaced. Requires epsilon > 16/sqrt(T) and estimates whose
// generation equals expected_generation (stale samples are refused). A zero
// reach gap leaves the interval unchanged and flags "no_reach_gap".
PhaseReport pbisa(const PandoraPlayFn& play, std::int64_t T, const ConstraintGroup& group,
                  int box, const CdfEstimates& cdfs, double epsilon, double c_explore,
                  SearchMode mode, int expected_generation, std::int64_t max_rounds = -1);

struct SwapTestResult {
    ConstraintGroup group;  // updated when a relation was resolved
    bool constraint_added = false;
    std::pair<int, int> added{-1, -1};
    double gap = 0.0;  // R_hat(i first) - R_hat(j first)
    std::int64_t rounds_used = 0;
    PandoraPolicy i_first;
    PandoraPolicy j_first;
};

// Probes whether box i should precede box j. Both policies share the
// threshold tau = max{l_i, l_j} on the tested pair, put every box that must
// sit in front (relation predecessors of i or j, or lower bound above tau)
// at its upper bound and the rest at lower bounds, and differ only in the
// adjacent i/j order. Each is played for explore_round_count(T, c_explore,
// n * epsilon) rounds. A gap above 40 * n * epsilon resolves the order and
// tightens the group; otherwise the true swap difference is certified to be
// at most 60 * n * epsilon and the group is returned unchanged. Requires
// that the pair is unordered and that the two intervals overlap.
SwapTestResult swaptest(const PandoraPlayFn& play, std::int64_t T, const ConstraintGroup& group,
                        int i, int j, double epsilon, double c_explore);

struct PanAlgReport {
    ConstraintGroup group;
    std::int64_t rounds_estimate = 0;  // free-sample rounds, not group-valid
    std::int64_t rounds_pbisa = 0;
    std::int64_t rounds_swaptest = 0;
    int pbisa_calls = 0;
    int swaptest_calls = 0;
    std::vector<std::string> flags;

    std::int64_t rounds_used() const {
        return rounds_estimate + rounds_pbisa + rounds_swaptest;
    }
};

// One constraint-updating phase at accuracy epsilon. Step 1 shrinks every
// interval with pbisa, rebuilding all CDF estimates from
// estimate_sample_count(T, c_estimate, epsilon, n) fresh single-open samples
// per box before each shrink, then propagates relations into intervals and
// turns disjoint intervals into relations. Step 2 settles every unordered
// pair through swaptest, re-testing a box's open pairs whenever its lower
// bound moves. Throws std::logic_error if the swaptest count would exceed
// the 4 n^3 per-phase budget. Estimate rounds play single-open policies and
// are reported separately because they ignore the group's intervals.
PanAlgReport pan_alg(const PandoraPlayFn& play, const ConstraintGroup& group,
                     const std::vector<double>& costs, double epsilon, const LearnerConfig& cfg,
                     SearchMode mode);

// One threshold move or one adjacent transposition. A move rewrites the
// moved box's threshold from `from` to `to` in place; a swap advances `box`
// one position past `other`, which must sit directly before it and share its
// threshold.
struct PolicyOp {
    bool swap = false;
    int box = -1;
    int other = -1;   // swap partner, -1 for moves
    double from = 0.0;
    double to = 0.0;
};

// Applies one op, validating that it matches the policy's current state
// (std::invalid_argument otherwise).
PandoraPolicy apply_op(const PandoraPolicy& policy, const PolicyOp& op);

// Every threshold at its lower bound, boxes in nonincreasing threshold order
// with ties broken by the order relations and then by box id. Valid for any
// well-formed group.
PandoraPolicy canonical_policy(const ConstraintGroup& group);

// Operation sequence transforming `policy` into canonical_policy(group) one
// op at a time. Every intermediate policy is valid for the group, and the
// sequence contains at most 2 n^2 moves and 2 n^2 swaps. Throws
// std::invalid_argument when the input policy does not validate.
std::vector<PolicyOp> convert_policy(const ConstraintGroup& group, const PandoraPolicy& policy);

// Open `box`, then stop: position two carries threshold zero, which every
// observed value meets. utility + costs[box] recovers the box's draw.
PandoraPolicy single_open_policy(int n, int box);

// Plays single_open_policy(n, box) `count` times and returns the recovered
// draws of X_box.
std::vector<double> harvest_box_samples(const PandoraPlayFn& play, int n, int box, double cost,
                                        std::int64_t count);

// Fresh estimates for every box from `samples_per_box` single-open draws
// each, tagged with `generation`.
CdfEstimates estimate_pandora_cdfs(const PandoraPlayFn& play, const std::vector<double>& costs,
                                   std::int64_t samples_per_box, int generation);

// Empirical gain of opening a box with CDF estimate fhat at cost `cost` when
// the best value in hand is v: -cost + int_v^1 (1 - fhat).
double empirical_gain(const EmpiricalCdf& fhat, double cost, double v);

struct PandoraInit {
    CdfEstimates cdfs;
    ConfidenceIntervals intervals;
    std::int64_t rounds_used = 0;
};

// Harvests init_sample_count(T, c_init, 1) single-open samples per box and
// brackets each reservation value by the band where the empirical gain is
// small: [l_i, u_i] = {tau : |ghat_i(tau)| <= T^{-1/4} / 2}. The empirical
// gain is nonincreasing, so the band is an interval. Throws
// std::runtime_error when a box's gain sits below the band everywhere (cost
// too large for the observed values: no reservation value to bracket).
PandoraInit init_pandora(const PandoraPlayFn& play, int n, std::int64_t T, double c_init,
                         const std::vector<double>& costs);

// One shrinking phase for the two-box fixed-order game: box 0 is always
// opened first and the game stops before box 1 when the observed value
// reaches tau, played as order {0, 1} with thresholds {1, tau}. Plays
// tau = interval.lo then interval.hi for explore_round_count(T, c_explore,
// epsilon) rounds each and keeps the thresholds whose estimated penalty
// stays within 4 * epsilon; the penalty curve matches pbisa's with front
// product F_0 and target CDF F_1. fhat0 and fhat1 must be fresh for the
// phase. Requires epsilon > 1/sqrt(T).
PhaseReport isa_fixed_order(const PandoraPlayFn& play, std::int64_t T, const Interval& interval,
                            const EmpiricalCdf& fhat0, const EmpiricalCdf& fhat1, double epsilon,
                            double c_explore, std::int64_t max_rounds = -1);

} // namespace bandits
