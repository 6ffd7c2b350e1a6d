// environment.hpp
#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bandits/distribution.hpp"
#include "bandits/dyadic.hpp"
#include "bandits/policy.hpp"
#include "bandits/rng.hpp"

namespace bandits {

// How much of a round's outcome the caller is shown. Richer models reveal a
// superset of what poorer models reveal; learners in this library consume
// only the scalar (see the play-function aliases below).
enum class FeedbackModel { kValueOnly, kIndexValue, kPrefix };

FeedbackModel parse_feedback_model(const std::string& name);  // value | index | prefix
std::string feedback_model_name(FeedbackModel model);

struct RoundFeedback {
    // Reward (selection game) or utility (inspection game). Always populated.
    double value = 0.0;
    // Selection game: 0-based index of the box taken. Inspection game: number
    // of boxes opened. Populated under kIndexValue and kPrefix.
    std::optional<int> selected_index;
    // Values revealed before the round ended, in play order. kPrefix only.
    std::vector<double> observed_prefix;
};

class ProphetEnv {
public:
    ProphetEnv(ProphetInstance inst, std::uint64_t seed,
               FeedbackModel model = FeedbackModel::kValueOnly)
        : inst_(std::move(inst)), rng_(seed), model_(model) {}

    // Draws values lazily in box order until one is taken; the last box is
    // taken whenever reached.
    RoundFeedback step(const ProphetAction& action);

    const ProphetInstance& instance() const { return inst_; }
    FeedbackModel feedback_model() const { return model_; }
    std::int64_t rounds_played() const { return rounds_; }

private:
    ProphetInstance inst_;
    RngStream rng_;
    FeedbackModel model_;
    std::int64_t rounds_ = 0;
};

class PandoraEnv {
public:
    PandoraEnv(PandoraInstance inst, std::uint64_t seed,
               FeedbackModel model = FeedbackModel::kValueOnly)
        : inst_(std::move(inst)), rng_(seed), model_(model) {}

    // Opens boxes along the policy order, stopping before any box whose
    // threshold the running max already clears; the first box is always
    // opened. Utility = best opened value - total opened cost.
    RoundFeedback step(const PandoraPolicy& policy);

    const PandoraInstance& instance() const { return inst_; }
    FeedbackModel feedback_model() const { return model_; }
    std::int64_t rounds_played() const { return rounds_; }

private:
    PandoraInstance inst_;
    RngStream rng_;
    FeedbackModel model_;
    std::int64_t rounds_ = 0;
};

// The learners take a play function, not an environment, so the type system
// guarantees they read nothing beyond the scalar feedback.
using ProphetPlayFn = std::function<double(const ProphetAction&)>;
using PandoraPlayFn = std::function<double(const PandoraPolicy&)>;

// The returned callable borrows the environment; keep the environment alive.
ProphetPlayFn value_only_player(ProphetEnv& env);
PandoraPlayFn value_only_player(PandoraEnv& env);

// Oblivious adversary for the 2-box selection game. A uniform T-bit code s is
// drawn up front; round i (1-based) presents
//   X_1 = 1/2 + eps * v_i,   X_2 = s_i,
// where v_i is the dyadic midpoint between Bin(s_1..s_{i-1} 0 1^{T-i}) and
// Bin(s_1..s_{i-1} 1 0^{T-i}), so v_i < Bin(s) exactly when s_i = 1. Knowing
// s, the fixed threshold 1/2 + eps * Bin(s) collects every 1 and earns 3/4
// per round; without s any play earns 1/2 + O(eps).
class AdversarialProphetEnv {
public:
    AdversarialProphetEnv(std::int64_t T, std::uint64_t seed, double epsilon_bias = 1e-6);

    double step(double tau1);   // learner-facing: threshold on X_1
    double step_hindsight();    // plays the hindsight threshold with exact-arithmetic compares

    double hindsight_threshold() const;  // 1/2 + eps * Bin(s), nearest double
    std::int64_t horizon() const { return T_; }
    std::int64_t rounds_played() const { return t_; }
    const std::vector<bool>& code() const { return s_; }
    Dyadic v_current() const;  // exposed for construction tests

private:
    double x1_current() const;

    std::int64_t T_;
    double eps_;
    std::vector<bool> s_;
    Dyadic s_bin_;
    std::int64_t t_ = 0;  // completed rounds
};

// Inspection-game analog: box 0 is free with X_0 = eps * v_i; box 1 costs 1/2
// and contains s_i. Knowing s, stopping exactly on the rounds with s_i = 0
// earns 1/4 per round; without s every policy earns O(eps).
class AdversarialPandoraEnv {
public:
    AdversarialPandoraEnv(std::int64_t T, std::uint64_t seed, double epsilon_bias = 1e-6);

    double step(const PandoraPolicy& policy);  // any valid 2-box policy
    double step_stop_threshold(double tau);    // order (0,1), stop when X_0 >= tau
    double step_hindsight();

    double hindsight_threshold() const;  // eps * Bin(s), nearest double
    std::int64_t horizon() const { return T_; }
    std::int64_t rounds_played() const { return t_; }
    const std::vector<bool>& code() const { return s_; }
    static constexpr double kCostBox0 = 0.0;
    static constexpr double kCostBox1 = 0.5;

private:
    double x0_current() const;
    Dyadic v_current() const;

    std::int64_t T_;
    double eps_;
    std::vector<bool> s_;
    Dyadic s_bin_;
    std::int64_t t_ = 0;
};

// The √T-hard stochastic pair: X_1 = 1/2 always, X_2 Bernoulli with success
// probability 1/2 + bias or 1/2 - bias, bias = 1/sqrt(T). Distinguishing the
// two signs requires Omega(sqrt(T)) rounds, yet their optimal thresholds
// differ.
struct HardStochasticFamily {
    ProphetInstance plus;
    ProphetInstance minus;
    ProphetInstance midpoint;
    double bias = 0.0;
};

HardStochasticFamily hard_stochastic_prophet(std::int64_t T);

} // namespace bandits
