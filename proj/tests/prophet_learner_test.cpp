// Initialization and interval-shrinking phases for the selection game.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bandits/concentration.hpp"
#include "bandits/environment.hpp"
#include "bandits/oracle.hpp"
#include "bandits/prophet_learner.hpp"
#include "test_util.hpp"

using namespace bandits;

namespace {

ProphetInstance uniform_point_instance() {
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::uniform(0.0, 1.0), BoundedDistribution::point(0.5)};
    return inst;
}

// First box 0.2 or 0.8 with equal odds, second box pinned at 0.5. The two
// first-box samples {0.2, 0.8} reproduce the true CDF exactly, so phases fed
// that estimate and exact average rewards refine without noise.
ProphetInstance two_atom_instance() {
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::from_atoms({{0.2, 0.5}, {0.8, 0.5}}),
                  BoundedDistribution::point(0.5)};
    return inst;
}

ProphetPlayFn oracle_play(const ProphetInstance& inst) {
    return [&inst](const ProphetAction& a) { return prophet_expected_reward(inst, a); };
}

// Sup distance between the empirical CDF of `samples` and the uniform CDF on
// [0,1]; the maximum is attained at a sample from one side or the other.
double sup_error_vs_uniform(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        worst = std::max(worst, samples[i] - static_cast<double>(i) / n);
        worst = std::max(worst, static_cast<double>(i + 1) / n - samples[i]);
    }
    return worst;
}

} // namespace

static void test_validation() {
    const ProphetPlayFn noop = [](const ProphetAction&) { return 0.0; };
    CHECK_THROWS(init2(noop, 3, 4.0));
    // 16^{0.5/2} = 2 makes the confidence level 2*T^{-c/2} hit 1.
    CHECK_THROWS(init2(noop, 16, 0.5));
    CHECK_THROWS(init_general(noop, 1, 10000, 4.0));

    EmpiricalCdf fhat({0.2, 0.8});
    CHECK_THROWS(isa2(noop, 10000, {0.1, 0.7}, fhat, 0.01, 4.0));       // eps == T^{-1/2}
    CHECK_THROWS(isa2(noop, 10000, {0.7, 0.1}, fhat, 0.1, 4.0));        // inverted interval
    CHECK_THROWS(isa2(noop, 10000, {-0.1, 0.7}, fhat, 0.1, 4.0));      // out of range

    ConfidenceIntervals ivs;
    ivs.bounds = {{0.1, 0.7}, {0.1, 0.7}};
    CdfEstimates cdfs;
    cdfs.fhat = {fhat, fhat, fhat};
    CHECK_THROWS(isa_general(noop, 3, 1000000, ivs, cdfs, 0.012, 4.0));  // eps == 12 T^{-1/2}
    ivs.bounds = {{0.1, 0.7}};
    CHECK_THROWS(isa_general(noop, 3, 1000000, ivs, cdfs, 0.05, 4.0));   // wrong interval count
    ivs.bounds = {{0.1, 0.7}, {0.1, 0.7}};
    cdfs.fhat = {fhat};
    CHECK_THROWS(isa_general(noop, 3, 1000000, ivs, cdfs, 0.05, 4.0));   // missing estimates
}

static void test_init2_deterministic() {
    // Point boxes make every sample and average exact, so the interval and
    // sample set can be checked to machine precision.
    const std::int64_t T = 1000000;
    const std::int64_t N = init_sample_count(T, 4.0, 1);
    CHECK(N == 55263);

    std::int64_t calls = 0;
    const ProphetPlayFn play = [&](const ProphetAction& a) {
        ++calls;
        if (calls <= N) {
            CHECK(a.thresholds.size() == 1 && a.thresholds[0] == 0.0);
            return 0.7;  // first box accepted outright
        }
        CHECK(a.thresholds.size() == 1 && is_above(a.thresholds[0]));
        return 0.4;  // first box skipped, second box collected
    };

    const ProphetInit2 out = init2(play, T, 4.0);
    CHECK(calls == 2 * N);
    CHECK(out.rounds_used == 2 * N);
    CHECK_NEAR(out.radius, 0.015811251285934778, 1e-15);
    CHECK(out.radius <= 0.5 * std::pow(static_cast<double>(T), -0.25));
    // Summation over N rounds leaves accumulation error in the mean.
    CHECK_NEAR(out.interval.lo, 0.4 - out.radius, 1e-11);
    CHECK_NEAR(out.interval.hi, 0.4 + out.radius, 1e-11);
    CHECK(out.cdfs.fhat.size() == 1);
    CHECK(out.cdfs.fhat[0].count() == N);
    CHECK(out.cdfs.fhat[0].generation() == 0);
    CHECK_NEAR(out.cdfs.fhat[0].value(0.7), 1.0, 1e-15);
    CHECK_NEAR(out.cdfs.fhat[0].value(0.69), 0.0, 1e-15);
    CHECK_NEAR(out.cdfs.product_error_budget, std::pow(1e6, -0.25), 1e-15);
}

static void test_init2_env_statistical() {
    // Uniform second box: the interval must trap the mean 0.5 and obey the
    // width budget; the first-box estimate must sit within the DKW radius.
    const std::int64_t T = 1000000;
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::uniform(0.0, 1.0), BoundedDistribution::uniform(0.0, 1.0)};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        ProphetEnv env(inst, seed);
        const ProphetInit2 out = init2(value_only_player(env), T, 4.0);
        CHECK(out.interval.contains(0.5));
        CHECK(out.interval.width() <= std::pow(static_cast<double>(T), -0.25) + 1e-12);
        CHECK(env.rounds_played() == out.rounds_used);
        const double sup = sup_error_vs_uniform(out.cdfs.fhat[0].sorted_samples());
        CHECK(sup <= dkw_radius(out.cdfs.fhat[0].count(), 1e-6));
    }
}

static void test_isa2_exact() {
    const ProphetInstance inst = two_atom_instance();
    const EmpiricalCdf fhat({0.2, 0.8});
    const std::int64_t T = 1000000;

    // Across [0.1, 0.7] the bound estimate is 0.5*(tau - 0.5) exactly, so
    // cuts at 5*eps = 0.1 land on 0.3 and 0.7.
    PhaseReport r = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, 0.02, 0.001);
    CHECK(r.refined.size() == 1);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.3, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.7, 1e-12);
    CHECK(r.refined.bounds[0].contains(0.5));
    CHECK(r.flags.empty());
    CHECK(r.rounds_used == 2 * explore_round_count(T, 0.001, 0.02));
    for (std::size_t i = 1; i < r.delta_hat_trace.size(); ++i) {
        CHECK(r.delta_hat_trace[i].second >= r.delta_hat_trace[i - 1].second - 1e-15);
    }

    // Between the atoms the estimated CDF is flat, so nothing can be learned
    // and the interval survives unchanged.
    r = isa2(oracle_play(inst), T, {0.4, 0.6}, fhat, 0.02, 0.001);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.4, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.6, 1e-15);
    CHECK(r.flags.empty());
}

static void test_isa2_truncation() {
    const ProphetInstance inst = two_atom_instance();
    const EmpiricalCdf fhat({0.2, 0.8});
    const std::int64_t T = 1000000;
    const std::int64_t k = explore_round_count(T, 0.001, 0.02);

    // No budget at all: nothing plays, interval unchanged.
    PhaseReport r = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, 0.02, 0.001, 0);
    CHECK(r.truncated());
    CHECK(r.rounds_used == 0);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.1, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.7, 1e-15);

    // Budget covers only the lower arm: still unchanged.
    r = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, 0.02, 0.001, k);
    CHECK(r.truncated());
    CHECK(r.rounds_used == k);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.7, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.1, 1e-15);

    // Partial upper arm: the oracle play is deterministic, so the shortened
    // average matches the full one and refinement proceeds.
    r = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, 0.02, 0.001, k + k / 2);
    CHECK(r.truncated());
    CHECK(r.rounds_used == k + k / 2);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.3, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.7, 1e-12);

    // Exact budget: no flag.
    r = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, 0.02, 0.001, 2 * k);
    CHECK(!r.truncated());
    CHECK(r.rounds_used == 2 * k);
}

static void test_isa2_degenerate() {
    // Synthetic rewards push the whole bound estimate above the upper cut:
    // with F(0.8) = 0.8, F(0.9) = 0.9 the estimate is 0.1*tau - 0.05, which
    // spans [0.03, 0.04] over the box while the cut sits at 0.025.
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.05 + 0.1 * i);
    const EmpiricalCdf fhat(grid);
    const ProphetPlayFn play = [](const ProphetAction& a) {
        return a.thresholds[0] < 0.85 ? 0.5 : 0.465;
    };
    const PhaseReport r = isa2(play, 1000000, {0.8, 0.9}, fhat, 0.005, 0.001);
    CHECK(r.degenerate());
    CHECK_NEAR(r.refined.bounds[0].lo, 0.8, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.8, 1e-15);
}

static void test_isa2_env_statistical() {
    // Full pipeline on a stochastic instance: initialize, then run two
    // shrinking phases and confirm each interval nests the next and all of
    // them trap the optimal threshold 0.5.
    const std::int64_t T = 1000000;
    const ProphetInstance inst = uniform_point_instance();
    const ProphetOpt opt = prophet_opt(inst);
    CHECK_NEAR(opt.opt_thresholds[0], 0.5, 1e-12);

    for (std::uint64_t seed = 11; seed <= 12; ++seed) {
        ProphetEnv env(inst, seed);
        const ProphetPlayFn play = value_only_player(env);
        const ProphetInit2 start = init2(play, T, 4.0);
        CHECK(start.interval.contains(0.5));

        const PhaseReport p1 = isa2(play, T, start.interval, start.cdfs.fhat[0], 0.05, 4.0);
        CHECK(p1.flags.empty());
        CHECK(p1.rounds_used == 2 * explore_round_count(T, 4.0, 0.05));
        CHECK(start.interval.contains(p1.refined.bounds[0].lo));
        CHECK(start.interval.contains(p1.refined.bounds[0].hi));
        CHECK(p1.refined.bounds[0].contains(0.5));

        const PhaseReport p2 =
            isa2(play, T, p1.refined.bounds[0], start.cdfs.fhat[0], 0.025, 4.0);
        CHECK(p1.refined.nests(p2.refined));
        CHECK(p2.refined.bounds[0].contains(0.5));
    }
}

static void test_init_general_exact() {
    // Point boxes: every harvested sample and every suffix average is exact.
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::point(0.3), BoundedDistribution::point(0.6),
                  BoundedDistribution::point(0.45)};
    const std::int64_t T = 10000;
    const std::int64_t N = init_sample_count(T, 0.001, 3);
    CHECK(N == 9);
    const double slack = std::pow(static_cast<double>(T), -0.25) / 30.0;

    ProphetEnv env(inst, 7);
    const ProphetInitGeneral out = init_general(value_only_player(env), 3, T, 0.001);
    CHECK(out.rounds_used == 5 * N);
    CHECK(env.rounds_played() == out.rounds_used);
    CHECK(out.cdfs.fhat.size() == 3);
    for (int b = 0; b < 3; ++b) CHECK(out.cdfs.fhat[b].count() == N);
    CHECK_NEAR(out.cdfs.fhat[0].value(0.3), 1.0, 1e-15);
    CHECK_NEAR(out.cdfs.fhat[1].value(0.59), 0.0, 1e-15);
    CHECK_NEAR(out.cdfs.fhat[1].value(0.6), 1.0, 1e-15);
    CHECK_NEAR(out.cdfs.fhat[2].value(0.45), 1.0, 1e-15);

    // Suffix from box 3 alone is worth 0.45; from box 2 on it is worth 0.6
    // because 0.6 clears any threshold near 0.45.
    CHECK(out.intervals.size() == 2);
    CHECK_NEAR(out.intervals.bounds[1].lo, 0.45 - slack, 1e-12);
    CHECK_NEAR(out.intervals.bounds[1].hi, 0.45 + slack, 1e-12);
    CHECK_NEAR(out.intervals.bounds[0].lo, 0.6 - slack, 1e-12);
    CHECK_NEAR(out.intervals.bounds[0].hi, 0.6 + 3.0 * slack, 1e-12);

    const ProphetOpt opt = prophet_opt(inst);
    CHECK_NEAR(opt.opt_thresholds[0], 0.6, 1e-12);
    CHECK_NEAR(opt.opt_thresholds[1], 0.45, 1e-12);
    CHECK(out.intervals.bounds[0].contains(opt.opt_thresholds[0]));
    CHECK(out.intervals.bounds[1].contains(opt.opt_thresholds[1]));
}

namespace {

// Three boxes with atom laws whose two-sample empirical CDFs are exact.
ProphetInstance three_atom_instance() {
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::from_atoms({{0.2, 0.5}, {0.8, 0.5}}),
                  BoundedDistribution::from_atoms({{0.3, 0.5}, {0.7, 0.5}}),
                  BoundedDistribution::point(0.45)};
    return inst;
}

CdfEstimates three_atom_cdfs() {
    CdfEstimates cdfs;
    cdfs.fhat = {EmpiricalCdf({0.2, 0.8}), EmpiricalCdf({0.3, 0.7}), EmpiricalCdf({0.45})};
    return cdfs;
}

} // namespace

static void test_isa_general_exact() {
    // Position 2 sees the estimate 0.5*(tau - 0.45) and cuts [-eps, eps];
    // position 1 then plays the refined lower bound 0.41 behind itself, sees
    // 0.5*(tau - 0.575), and cuts [-eps, 3*eps].
    const ProphetInstance inst = three_atom_instance();
    const std::int64_t T = 1000000;
    const double eps = 0.02;
    ConfidenceIntervals ivs;
    ivs.bounds = {{0.5, 0.85}, {0.25, 0.5}};

    const PhaseReport r = isa_general(oracle_play(inst), 3, T, ivs, three_atom_cdfs(), eps, 0.001);
    const std::int64_t k = explore_round_count(T, 0.001, eps);
    CHECK(r.rounds_used == 4 * k);
    CHECK(r.flags.empty());
    CHECK(ivs.nests(r.refined));
    CHECK_NEAR(r.refined.bounds[1].lo, 0.41, 1e-12);
    CHECK_NEAR(r.refined.bounds[1].hi, 0.49, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.535, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.695, 1e-12);

    const ProphetOpt opt = prophet_opt(inst);
    CHECK_NEAR(opt.opt_thresholds[0], 0.575, 1e-12);
    CHECK_NEAR(opt.opt_thresholds[1], 0.45, 1e-12);
    CHECK(r.refined.bounds[0].contains(opt.opt_thresholds[0]));
    CHECK(r.refined.bounds[1].contains(opt.opt_thresholds[1]));
}

static void test_isa_general_truncation() {
    const ProphetInstance inst = three_atom_instance();
    const std::int64_t T = 1000000;
    const std::int64_t k = explore_round_count(T, 0.001, 0.02);
    ConfidenceIntervals ivs;
    ivs.bounds = {{0.5, 0.85}, {0.25, 0.5}};

    // Budget for the last position only: position 1 is left untouched.
    PhaseReport r = isa_general(oracle_play(inst), 3, T, ivs, three_atom_cdfs(), 0.02, 0.001, 2 * k);
    CHECK(r.truncated());
    CHECK(r.rounds_used == 2 * k);
    CHECK_NEAR(r.refined.bounds[1].lo, 0.41, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.5, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.85, 1e-15);

    // One arm of position 1 starved: that interval survives unchanged.
    r = isa_general(oracle_play(inst), 3, T, ivs, three_atom_cdfs(), 0.02, 0.001, 3 * k);
    CHECK(r.truncated());
    CHECK(r.rounds_used == 3 * k);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.5, 1e-15);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.85, 1e-15);

    // Partial second arm still refines because the play here is noiseless.
    r = isa_general(oracle_play(inst), 3, T, ivs, three_atom_cdfs(), 0.02, 0.001, 3 * k + 10);
    CHECK(r.truncated());
    CHECK(r.rounds_used == 3 * k + 10);
    CHECK_NEAR(r.refined.bounds[0].lo, 0.535, 1e-12);
    CHECK_NEAR(r.refined.bounds[0].hi, 0.695, 1e-12);
}

static void test_isa_general_matches_isa2() {
    // On two boxes both phases see the same estimate 0.5*(tau - 0.5); the
    // general cuts are 5x tighter, so its interval nests inside the other.
    const ProphetInstance inst = two_atom_instance();
    const EmpiricalCdf fhat({0.2, 0.8});
    const std::int64_t T = 1000000;
    const double eps = 0.05;

    const PhaseReport two = isa2(oracle_play(inst), T, {0.1, 0.7}, fhat, eps, 0.001);
    ConfidenceIntervals ivs;
    ivs.bounds = {{0.1, 0.7}};
    CdfEstimates cdfs;
    cdfs.fhat = {fhat};
    const PhaseReport gen = isa_general(oracle_play(inst), 2, T, ivs, cdfs, eps, 0.001);

    CHECK(two.refined.nests(gen.refined));
    CHECK_NEAR(two.refined.bounds[0].lo, 0.1, 1e-12);
    CHECK_NEAR(two.refined.bounds[0].hi, 0.7, 1e-12);
    CHECK_NEAR(gen.refined.bounds[0].lo, 0.4, 1e-12);
    CHECK_NEAR(gen.refined.bounds[0].hi, 0.6, 1e-12);
    CHECK(gen.refined.bounds[0].contains(0.5));
}

static void test_general_env_statistical() {
    // Narrow tail boxes keep the suffix averages tight, so the produced
    // intervals trap the optimal thresholds and a phase shrinks them.
    const std::int64_t T = 1000000;
    ProphetInstance inst;
    inst.boxes = {BoundedDistribution::uniform(0.0, 1.0),
                  BoundedDistribution::uniform(0.45, 0.55),
                  BoundedDistribution::uniform(0.45, 0.55)};
    const ProphetOpt opt = prophet_opt(inst);

    ProphetEnv env(inst, 21);
    const ProphetPlayFn play = value_only_player(env);
    const ProphetInitGeneral start = init_general(play, 3, T, 4.0);
    CHECK(start.rounds_used == 5 * init_sample_count(T, 4.0, 3));
    const double slack = std::pow(static_cast<double>(T), -0.25) / 30.0;
    CHECK_NEAR(start.intervals.bounds[1].width(), 2.0 * slack, 1e-12);
    CHECK_NEAR(start.intervals.bounds[0].width(), 4.0 * slack, 1e-12);
    CHECK(start.intervals.bounds[0].contains(opt.opt_thresholds[0]));
    CHECK(start.intervals.bounds[1].contains(opt.opt_thresholds[1]));

    const PhaseReport r = isa_general(play, 3, T, start.intervals, start.cdfs, 0.05, 4.0);
    CHECK(r.flags.empty());
    CHECK(start.intervals.nests(r.refined));
    CHECK(r.refined.bounds[0].contains(opt.opt_thresholds[0]));
    CHECK(r.refined.bounds[1].contains(opt.opt_thresholds[1]));
}

int main() {
    test_validation();
    test_init2_deterministic();
    test_init2_env_statistical();
    test_isa2_exact();
    test_isa2_truncation();
    test_isa2_degenerate();
    test_isa2_env_statistical();
    test_init_general_exact();
    test_isa_general_exact();
    test_isa_general_truncation();
    test_isa_general_matches_isa2();
    test_general_env_statistical();
    testutil::done("prophet_learner_test");
    return 0;
}
