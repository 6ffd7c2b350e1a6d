#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bandits/environment.hpp"
#include "bandits/learner_core.hpp"
#include "bandits/pandora_learner.hpp"
#include "bandits/prophet_learner.hpp"

namespace bandits {

// Halving schedule: phases run at epsilon = 1, 1/2, 1/4, ... and stop once
// epsilon <= n^{alpha/2} * ln T / sqrt(T). alpha trades per-phase cost
// against how small the final accuracy gets; the assembled runners below
// pick it themselves.
struct DoublingConfig {
    std::int64_t T = 0;
    int n = 1;
    double alpha = 0.0;

    double epsilon_floor() const;
};

// What one phase hands back to the driver. rounds_used must not exceed the
// cap the phase was given.
struct PhaseOutcome {
    std::int64_t rounds_used = 0;
    bool truncated = false;
    std::vector<std::string> flags;
};

struct PhaseRecord {
    double epsilon = 0.0;
    std::int64_t rounds_used = 0;
    std::vector<std::string> flags;
};

// Round accounting for one full run. Initialization, the shrinking phases,
// and the constant tail add up to exactly T.
struct DoublingReport {
    std::vector<PhaseRecord> phases;
    std::int64_t rounds_init = 0;
    std::int64_t rounds_phases = 0;
    std::int64_t rounds_tail = 0;
    bool truncated = false;

    std::int64_t rounds_used() const { return rounds_init + rounds_phases + rounds_tail; }
};

using PhaseFn = std::function<PhaseOutcome(double epsilon, std::int64_t max_rounds)>;
using TailFn = std::function<void(std::int64_t rounds)>;

// Runs `phase` at every epsilon of the halving schedule, each call capped by
// the rounds still unspent, stops at the floor or right after a truncated
// phase, then hands every leftover round to `tail`. Throws
// std::invalid_argument on a bad config or when init_rounds already exceeds
// T, and std::logic_error when a phase reports more rounds than its cap.
DoublingReport run_doubling(const DoublingConfig& cfg, std::int64_t init_rounds,
                            const PhaseFn& phase, const TailFn& tail);

// Full bandit run for the threshold games: initialization, shrinking phases,
// then the midpoint action for every remaining round.
struct ProphetBanditRun {
    DoublingReport schedule;
    std::vector<PhaseReport> phases;  // one per schedule entry
    ConfidenceIntervals intervals;    // final threshold set
    ProphetAction tail_action;
};

// Two boxes: init2 once, then one isa2 phase per schedule step reusing the
// initialization's first-box estimate. alpha = 0.
ProphetBanditRun run_prophet2_bandit(const ProphetPlayFn& play, const LearnerConfig& cfg);

// n >= 2 boxes: init_general once, then one isa_general phase per schedule
// step. alpha = 5.
ProphetBanditRun run_prophet_bandit(const ProphetPlayFn& play, int n, const LearnerConfig& cfg);

struct PandoraFixedBanditRun {
    DoublingReport schedule;
    std::vector<PhaseReport> phases;  // isa rounds only; estimates are extra
    Interval interval;                // final threshold set for box 1
    PandoraPolicy tail_policy;
};

// Two boxes opened in fixed order {0, 1}: init_pandora once, then per phase
// fresh CDF estimates (2 * estimate_sample_count rounds, counted in the
// schedule but not in the phase report) followed by isa_fixed_order on box
// 1's interval. Tail plays the midpoint threshold. alpha = 0.
PandoraFixedBanditRun run_pandora2_bandit(const PandoraPlayFn& play,
                                          const std::vector<double>& costs,
                                          const LearnerConfig& cfg);

struct PandoraBanditRun {
    DoublingReport schedule;
    std::vector<PanAlgReport> phases;  // one per non-truncated schedule entry
    ConstraintGroup group;             // final intervals and order relations
    PandoraPolicy tail_policy;
};

// n >= 2 boxes, order learned: init_pandora once, then one pan_alg phase per
// schedule step. pan_alg takes no round cap, so a phase whose worst-case
// budget (estimates + pbisa arms + 4 n^3 swap tests) does not fit in the
// remaining rounds is skipped as truncated instead. Tail plays the group's
// canonical policy. alpha = 5.
PandoraBanditRun run_pandora_bandit(const PandoraPlayFn& play, const std::vector<double>& costs,
                                    const LearnerConfig& cfg, SearchMode mode);

} // namespace bandits
