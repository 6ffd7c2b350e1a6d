// environment_test.cpp
#include "bandits/environment.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "bandits/oracle.hpp"
#include "test_util.hpp"

using namespace bandits;

namespace {

ProphetInstance two_point_instance() {
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::from_atoms({{0.25, 0.5}, {0.75, 0.5}}),
                  BoundedDistribution::point(0.5)};
    return inst;
}

void test_prophet_env_semantics() {
    // Deterministic boxes expose the acceptance rule: a value equal to the
    // threshold is declined.
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::point(0.5), BoundedDistribution::point(0.9)};
    ProphetEnv env(inst, 7);
    ProphetAction at_value{{0.5}};
    ProphetAction below{{0.49}};
    ProphetAction skip{{kAbove}};
    CHECK_NEAR(env.step(at_value).value, 0.9, 0.0);
    CHECK_NEAR(env.step(below).value, 0.5, 0.0);
    CHECK_NEAR(env.step(skip).value, 0.9, 0.0);
    CHECK(env.rounds_played() == 3);

    ProphetAction bad{{0.5, 0.5}};
    CHECK_THROWS(env.step(bad));
}

void test_prophet_env_empirical_mean() {
    ProphetEnv env(two_point_instance(), 2024);
    ProphetAction a{{0.5}};
    const std::int64_t rounds = 1000000;
    double sum = 0.0;
    for (std::int64_t t = 0; t < rounds; ++t) sum += env.step(a).value;
    const double mean = sum / static_cast<double>(rounds);
    // reward is 0.75 or 0.5 equiprobably: sd = 0.125, so 3 s.e. = 3.75e-4.
    CHECK_NEAR(mean, prophet_expected_reward(two_point_instance(), a), 3.75e-4);
}

void test_feedback_models() {
    const ProphetInstance inst = two_point_instance();
    ProphetEnv ev(inst, 99, FeedbackModel::kValueOnly);
    ProphetEnv ei(inst, 99, FeedbackModel::kIndexValue);
    ProphetEnv ep(inst, 99, FeedbackModel::kPrefix);
    RngStream actions(5);
    for (int t = 0; t < 200; ++t) {
        ProphetAction a{{actions.next_double()}};
        const RoundFeedback fv = ev.step(a);
        const RoundFeedback fi = ei.step(a);
        const RoundFeedback fp = ep.step(a);
        CHECK(!fv.selected_index.has_value());
        CHECK(fv.observed_prefix.empty());
        CHECK(fi.selected_index.has_value());
        CHECK(fi.observed_prefix.empty());
        CHECK(fp.selected_index.has_value());
        // Identical seeds give identical draws, so the scalar agrees across
        // feedback models and the prefix ends at the selected box.
        CHECK_NEAR(fi.value, fv.value, 0.0);
        CHECK_NEAR(fp.value, fv.value, 0.0);
        CHECK(*fi.selected_index == *fp.selected_index);
        CHECK(static_cast<int>(fp.observed_prefix.size()) == *fp.selected_index + 1);
        CHECK_NEAR(fp.observed_prefix.back(), fp.value, 0.0);
    }
}

void test_pandora_env_semantics() {
    PandoraInstance inst;
    inst.boxes = {BoundedDistribution::point(0.6), BoundedDistribution::point(0.9)};
    inst.costs = {0.1, 0.2};
    PandoraEnv env(inst, 11, FeedbackModel::kPrefix);

    PandoraPolicy open_both{{0, 1}, {1.0, 0.7}};
    RoundFeedback fb = env.step(open_both);
    CHECK_NEAR(fb.value, 0.6, 1e-15);
    CHECK(*fb.selected_index == 2);
    CHECK(fb.observed_prefix.size() == 2);

    PandoraPolicy stop_early{{0, 1}, {1.0, 0.5}};
    fb = env.step(stop_early);
    CHECK_NEAR(fb.value, 0.5, 1e-15);
    CHECK(*fb.selected_index == 1);

    // The first box is opened unconditionally, even with a maximal threshold.
    PandoraPolicy high_first{{1, 0}, {0.0, 1.0}};
    fb = env.step(high_first);
    CHECK_NEAR(fb.value, 0.9 - 0.2, 1e-15);
    CHECK(*fb.selected_index == 1);

    PandoraPolicy bad{{0, 1}, {0.2, 0.7}};  // increasing along the order
    CHECK_THROWS(env.step(bad));
}

void test_pandora_trailing_zero_barrier() {
    // A zero threshold on the later box turns the round into a single paid
    // inspection of the first box: the running max is always >= 0.
    PandoraInstance inst;
    inst.boxes = {BoundedDistribution::uniform(0.0, 1.0),
                  BoundedDistribution::from_atoms({{0.2, 0.5}, {1.0, 0.5}})};
    inst.costs = {0.05, 0.125};
    PandoraEnv env(inst, 31, FeedbackModel::kIndexValue);
    PandoraPolicy probe_first{{0, 1}, {0.3, 0.0}};
    double sum = 0.0;
    const int rounds = 200000;
    for (int t = 0; t < rounds; ++t) {
        const RoundFeedback fb = env.step(probe_first);
        CHECK(*fb.selected_index == 1);
        sum += fb.value;
    }
    const double mean = sum / rounds;
    // E[X_0] - c_0 = 0.45; the box-0 draw has sd ~ 0.289.
    CHECK_NEAR(mean, inst.boxes[0].mean() - inst.costs[0], 3.0 * 0.289 / std::sqrt(1.0 * rounds));
}

void test_pandora_env_matches_oracle() {
    PandoraInstance inst;
    inst.boxes = {BoundedDistribution::from_atoms({{0.1, 0.3}, {0.6, 0.7}}),
                  BoundedDistribution::from_atoms({{0.0, 0.4}, {0.9, 0.6}}),
                  BoundedDistribution::from_atoms({{0.4, 0.5}, {0.8, 0.5}})};
    inst.costs = {0.02, 0.1, 0.05};
    PandoraPolicy pol{{2, 0, 1}, {0.5, 0.3, 0.7}};
    const UtilityEstimate exact = pandora_expected_utility(inst, pol);
    CHECK(exact.exact);
    PandoraEnv env(inst, 404);
    const int rounds = 400000;
    double sum = 0.0;
    for (int t = 0; t < rounds; ++t) sum += env.step(pol).value;
    const double mean = sum / rounds;
    CHECK_NEAR(mean, exact.value, 3.0 * 1.0 / std::sqrt(1.0 * rounds));
}

void test_value_only_players() {
    ProphetEnv ep1(two_point_instance(), 77);
    ProphetEnv ep2(two_point_instance(), 77);
    ProphetPlayFn play = value_only_player(ep1);
    ProphetAction a{{0.3}};
    for (int t = 0; t < 50; ++t) CHECK_NEAR(play(a), ep2.step(a).value, 0.0);

    PandoraInstance pinst;
    pinst.boxes = {BoundedDistribution::uniform(0.0, 1.0),
                   BoundedDistribution::uniform(0.0, 1.0)};
    pinst.costs = {0.1, 0.1};
    PandoraEnv eq1(pinst, 78);
    PandoraEnv eq2(pinst, 78);
    PandoraPlayFn playq = value_only_player(eq1);
    PandoraPolicy pol{{0, 1}, {0.6, 0.6}};
    for (int t = 0; t < 50; ++t) CHECK_NEAR(playq(pol), eq2.step(pol).value, 0.0);
}

void test_adversarial_prophet_construction() {
    const std::int64_t T = 4;
    AdversarialProphetEnv env(T, 123, 0.25);
    const std::vector<bool>& s = env.code();
    CHECK(s.size() == 4);
    // Round i's dyadic point is s_1..s_{i-1}, 0, then ones through T+1 bits.
    for (std::int64_t i = 1; i <= T; ++i) {
        std::vector<bool> want(static_cast<std::size_t>(T) + 1, true);
        for (std::int64_t k = 0; k + 1 < i; ++k) want[k] = s[k];
        want[i - 1] = false;
        CHECK(env.v_current().bits() == want);
        env.step(0.0);
    }
    CHECK_THROWS(env.step(0.0));
}

void test_adversarial_prophet_code_separation() {
    const std::int64_t T = 200;
    AdversarialProphetEnv env(T, 5150);
    const Dyadic bin_s(env.code());
    for (std::int64_t i = 0; i < T; ++i) {
        const Dyadic v = env.v_current();
        CHECK(v.compare(bin_s) != 0);
        // v sits below the code exactly on the rounds whose bit is one.
        CHECK((v < bin_s) == env.code()[static_cast<std::size_t>(i)]);
        env.step(0.75);
    }
}

void test_adversarial_prophet_rates() {
    const std::int64_t T = 2000;

    AdversarialProphetEnv knowing(T, 8675309);
    double sum = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum += knowing.step_hindsight();
    CHECK_NEAR(sum / static_cast<double>(T), 0.75, 0.04);

    // Rounding the hindsight threshold to a double destroys it: past the
    // mantissa the first-box value collapses onto the threshold, ties are
    // declined, and the play degrades to the uninformed rate. Decoding the
    // code requires the exact comparisons in step_hindsight.
    AdversarialProphetEnv fixed(T, 8675309);
    double sum_fixed = 0.0;
    const double tau = fixed.hindsight_threshold();
    for (std::int64_t t = 0; t < T; ++t) sum_fixed += fixed.step(tau);
    CHECK_NEAR(sum_fixed / static_cast<double>(T), 0.5, 0.04);

    AdversarialProphetEnv skip_all(T, 8675309);
    double sum_skip = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum_skip += skip_all.step(0.75);
    CHECK_NEAR(sum_skip / static_cast<double>(T), 0.5, 0.04);

    AdversarialProphetEnv take_all(T, 8675309);
    double sum_take = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum_take += take_all.step(0.25);
    CHECK_NEAR(sum_take / static_cast<double>(T), 0.5, 0.04);
}

void test_adversarial_pandora_rates() {
    const std::int64_t T = 2000;

    AdversarialPandoraEnv knowing(T, 24601);
    double sum = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum += knowing.step_hindsight();
    CHECK_NEAR(sum / static_cast<double>(T), 0.25, 0.04);

    AdversarialPandoraEnv stop_all(T, 24601);
    double sum_stop = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum_stop += stop_all.step_stop_threshold(0.0);
    CHECK_NEAR(sum_stop / static_cast<double>(T), 0.0, 0.04);

    AdversarialPandoraEnv open_all(T, 24601);
    double sum_open = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum_open += open_all.step_stop_threshold(1.0);
    CHECK_NEAR(sum_open / static_cast<double>(T), 0.0, 0.04);

    // Policy-based stepping agrees with the threshold shorthand.
    AdversarialPandoraEnv via_policy(T, 24601);
    AdversarialPandoraEnv via_tau(T, 24601);
    PandoraPolicy pol{{0, 1}, {1.0, 0.4}};
    for (std::int64_t t = 0; t < 100; ++t)
        CHECK_NEAR(via_policy.step(pol), via_tau.step_stop_threshold(0.4), 0.0);
}

void test_hard_stochastic_family() {
    const std::int64_t T = 10000;
    const HardStochasticFamily fam = hard_stochastic_prophet(T);
    CHECK_NEAR(fam.bias, 0.01, 1e-15);
    CHECK_NEAR(fam.plus.boxes[1].mean(), 0.51, 1e-15);
    CHECK_NEAR(fam.minus.boxes[1].mean(), 0.49, 1e-15);
    CHECK_NEAR(fam.midpoint.boxes[1].mean(), 0.5, 1e-15);

    const ProphetOpt opt_plus = prophet_opt(fam.plus);
    const ProphetOpt opt_minus = prophet_opt(fam.minus);
    CHECK_NEAR(opt_plus.opt_thresholds[0], 0.51, 1e-15);
    CHECK_NEAR(opt_plus.value(), 0.51, 1e-15);
    CHECK_NEAR(opt_minus.value(), 0.5, 1e-15);

    // Always skipping the first box is free under the plus sign but pays the
    // full bias per round under the minus sign.
    ProphetAction skip{{kAbove}};
    CHECK_NEAR(one_round_regret(fam.plus, skip), 0.0, 1e-15);
    CHECK_NEAR(one_round_regret(fam.minus, skip), fam.bias, 1e-15);
}

} // namespace

int main() {
    test_prophet_env_semantics();
    test_prophet_env_empirical_mean();
    test_feedback_models();
    test_pandora_env_semantics();
    test_pandora_trailing_zero_barrier();
    test_pandora_env_matches_oracle();
    test_value_only_players();
    test_adversarial_prophet_construction();
    test_adversarial_prophet_code_separation();
    test_adversarial_prophet_rates();
    test_adversarial_pandora_rates();
    test_hard_stochastic_family();
    testutil::done("environment_test");
    return 0;
}
