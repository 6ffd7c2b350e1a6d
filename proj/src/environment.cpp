// environment.cpp
#include "bandits/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace bandits {

FeedbackModel parse_feedback_model(const std::string& name) {
    if (name == "value") return FeedbackModel::kValueOnly;
    if (name == "index") return FeedbackModel::kIndexValue;
    if (name == "prefix") return FeedbackModel::kPrefix;
    throw std::invalid_argument("unknown feedback model '" + name +
                                "', expected value, index, or prefix");
}

std::string feedback_model_name(FeedbackModel model) {
    switch (model) {
        case FeedbackModel::kValueOnly: return "value";
        case FeedbackModel::kIndexValue: return "index";
        case FeedbackModel::kPrefix: return "prefix";
    }
    throw std::logic_error("unhandled feedback model");
}

namespace {

RoundFeedback filter_feedback(FeedbackModel model, double value, int index,
                              std::vector<double> prefix) {
    RoundFeedback fb;
    fb.value = value;
    if (model != FeedbackModel::kValueOnly) fb.selected_index = index;
    if (model == FeedbackModel::kPrefix) fb.observed_prefix = std::move(prefix);
    return fb;
}

} // namespace

RoundFeedback ProphetEnv::step(const ProphetAction& action) {
    const int n = inst_.n();
    require_well_formed(action, n);
    std::vector<double> seen;
    seen.reserve(static_cast<std::size_t>(n));
    int taken = n - 1;
    for (int i = 0; i < n; ++i) {
        const double x = inst_.boxes[static_cast<std::size_t>(i)].sample(rng_);
        seen.push_back(x);
        if (i == n - 1) break;
        const double tau = action.thresholds[static_cast<std::size_t>(i)];
        if (!is_above(tau) && x > tau) {
            taken = i;
            break;
        }
    }
    ++rounds_;
    const double reward = seen.back();
    return filter_feedback(model_, reward, taken, std::move(seen));
}

RoundFeedback PandoraEnv::step(const PandoraPolicy& policy) {
    const int n = inst_.n();
    if (policy.n() != n)
        throw std::invalid_argument("policy covers " + std::to_string(policy.n()) +
                                    " boxes, instance has " + std::to_string(n));
    require_well_formed(policy);
    std::vector<double> opened;
    opened.reserve(static_cast<std::size_t>(n));
    double best = 0.0;
    double paid = 0.0;
    for (int k = 0; k < n; ++k) {
        const int b = policy.order[static_cast<std::size_t>(k)];
        if (k > 0 && best >= policy.thresholds[static_cast<std::size_t>(b)]) break;
        paid += inst_.costs[static_cast<std::size_t>(b)];
        const double x = inst_.boxes[static_cast<std::size_t>(b)].sample(rng_);
        opened.push_back(x);
        best = std::max(best, x);
    }
    ++rounds_;
    const int count = static_cast<int>(opened.size());
    return filter_feedback(model_, best - paid, count, std::move(opened));
}

ProphetPlayFn value_only_player(ProphetEnv& env) {
    return [&env](const ProphetAction& a) { return env.step(a).value; };
}

PandoraPlayFn value_only_player(PandoraEnv& env) {
    return [&env](const PandoraPolicy& p) { return env.step(p).value; };
}

namespace {

std::vector<bool> draw_code(std::int64_t T, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("adversarial horizon must be >= 1");
    RngStream rng(seed);
    std::vector<bool> s(static_cast<std::size_t>(T));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng.next_bit();
    return s;
}

// Bits of v_i for 1-based round i: s_1..s_{i-1}, then 0, then ones through
// position T+1. This is the midpoint of the two codes that agree with s
// before position i and differ at it.
std::vector<bool> v_bits(const std::vector<bool>& s, std::int64_t T, std::int64_t i) {
    std::vector<bool> b(static_cast<std::size_t>(T) + 1, true);
    for (std::int64_t k = 0; k + 1 < i; ++k) b[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i - 1)] = false;
    return b;
}

} // namespace

AdversarialProphetEnv::AdversarialProphetEnv(std::int64_t T, std::uint64_t seed,
                                             double epsilon_bias)
    : T_(T), eps_(epsilon_bias), s_(draw_code(T, seed)), s_bin_(Dyadic(s_)) {
    if (!(eps_ > 0.0) || !(eps_ <= 0.25))
        throw std::invalid_argument("epsilon_bias must lie in (0, 0.25]");
}

Dyadic AdversarialProphetEnv::v_current() const {
    if (t_ >= T_) throw std::logic_error("adversarial horizon exhausted");
    return Dyadic(v_bits(s_, T_, t_ + 1));
}

double AdversarialProphetEnv::x1_current() const {
    return 0.5 + eps_ * v_current().to_double();
}

double AdversarialProphetEnv::step(double tau1) {
    const double x1 = x1_current();
    const bool take_first = !is_above(tau1) && x1 > tau1;
    const double reward = take_first ? x1 : (s_[static_cast<std::size_t>(t_)] ? 1.0 : 0.0);
    ++t_;
    return reward;
}

double AdversarialProphetEnv::step_hindsight() {
    // v_i never equals Bin(s); the strict compare below is exact.
    const Dyadic v = v_current();
    const bool take_first = s_bin_ < v;
    const double reward =
        take_first ? x1_current() : (s_[static_cast<std::size_t>(t_)] ? 1.0 : 0.0);
    ++t_;
    return reward;
}

double AdversarialProphetEnv::hindsight_threshold() const {
    return 0.5 + eps_ * s_bin_.to_double();
}

AdversarialPandoraEnv::AdversarialPandoraEnv(std::int64_t T, std::uint64_t seed,
                                             double epsilon_bias)
    : T_(T), eps_(epsilon_bias), s_(draw_code(T, seed)), s_bin_(Dyadic(s_)) {
    if (!(eps_ > 0.0) || !(eps_ <= 0.25))
        throw std::invalid_argument("epsilon_bias must lie in (0, 0.25]");
}

Dyadic AdversarialPandoraEnv::v_current() const {
    if (t_ >= T_) throw std::logic_error("adversarial horizon exhausted");
    return Dyadic(v_bits(s_, T_, t_ + 1));
}

double AdversarialPandoraEnv::x0_current() const {
    return eps_ * v_current().to_double();
}

double AdversarialPandoraEnv::step(const PandoraPolicy& policy) {
    if (policy.n() != 2) throw std::invalid_argument("adversarial inspection game has 2 boxes");
    require_well_formed(policy);
    const double values[2] = {x0_current(),
                              s_[static_cast<std::size_t>(t_)] ? 1.0 : 0.0};
    const double costs[2] = {kCostBox0, kCostBox1};
    double best = 0.0;
    double paid = 0.0;
    for (int k = 0; k < 2; ++k) {
        const int b = policy.order[static_cast<std::size_t>(k)];
        if (k > 0 && best >= policy.thresholds[static_cast<std::size_t>(b)]) break;
        paid += costs[b];
        best = std::max(best, values[b]);
    }
    ++t_;
    return best - paid;
}

double AdversarialPandoraEnv::step_stop_threshold(double tau) {
    PandoraPolicy pol;
    pol.order = {0, 1};
    pol.thresholds = {1.0, tau};
    return step(pol);
}

double AdversarialPandoraEnv::step_hindsight() {
    const Dyadic v = v_current();
    const double x0 = x0_current();
    const bool stop = s_bin_ < v;  // exact; holds iff s_i = 0
    const double utility =
        stop ? x0
             : std::max(x0, s_[static_cast<std::size_t>(t_)] ? 1.0 : 0.0) - kCostBox1;
    ++t_;
    return utility;
}

double AdversarialPandoraEnv::hindsight_threshold() const {
    return eps_ * s_bin_.to_double();
}

HardStochasticFamily hard_stochastic_prophet(std::int64_t T) {
    if (T < 4) throw std::invalid_argument("horizon too small for the hard pair");
    const double bias = 1.0 / std::sqrt(static_cast<double>(T));
    auto bernoulli = [](double p) {
        return BoundedDistribution::from_atoms({{0.0, 1.0 - p}, {1.0, p}});
    };
    HardStochasticFamily fam;
    fam.bias = bias;
    fam.plus.boxes = {BoundedDistribution::point(0.5), bernoulli(0.5 + bias)};
    fam.minus.boxes = {BoundedDistribution::point(0.5), bernoulli(0.5 - bias)};
    fam.midpoint.boxes = {BoundedDistribution::point(0.5), bernoulli(0.5)};
    return fam;
}

} // namespace bandits
