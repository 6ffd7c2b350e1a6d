// prophet_learner.cpp
#include "bandits/prophet_learner.hpp"

#include <cmath>
#include <stdexcept>

#include "bandits/concentration.hpp"

namespace bandits {

namespace {

double play_average(const ProphetPlayFn& play, const ProphetAction& action, std::int64_t rounds) {
    double sum = 0.0;
    for (std::int64_t t = 0; t < rounds; ++t) sum += play(action);
    return rounds > 0 ? sum / static_cast<double>(rounds) : 0.0;
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void require_unit_interval(const Interval& iv) {
    if (!(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0))
        throw std::invalid_argument("confidence interval must satisfy 0 <= lo <= hi <= 1");
}

void append_trace(PhaseReport& report, double slope, double intercept, const Interval& box) {
    const int kPoints = 5;
    for (int k = 0; k < kPoints; ++k) {
        const double tau = box.lo + box.width() * k / (kPoints - 1);
        report.delta_hat_trace.emplace_back(tau, slope * tau + intercept);
    }
}

} // namespace

ProphetInit2 init2(const ProphetPlayFn& play, std::int64_t T, double c_init) {
    if (T < 4) throw std::invalid_argument("horizon too small to initialize");
    if (!(c_init > 0.0)) throw std::invalid_argument("c_init must be positive");
    const double delta = 2.0 * std::pow(static_cast<double>(T), -c_init / 2.0);
    if (delta >= 1.0)
        throw std::invalid_argument("c_init too small for a nontrivial confidence level");

    const std::int64_t N = init_sample_count(T, c_init, 1);
    const ProphetAction accept_first{{0.0}};
    const ProphetAction skip_first{{kAbove}};

    std::vector<double> first_box_samples;
    first_box_samples.reserve(static_cast<std::size_t>(N));
    for (std::int64_t t = 0; t < N; ++t) first_box_samples.push_back(play(accept_first));

    const double mu = play_average(play, skip_first, N);

    ProphetInit2 out;
    out.radius = hoeffding_radius(N, 1.0, delta);
    out.interval = {clamp01(mu - out.radius), clamp01(mu + out.radius)};
    out.cdfs.fhat = {EmpiricalCdf(std::move(first_box_samples), 0)};
    out.cdfs.product_error_budget = std::pow(static_cast<double>(T), -0.25);
    out.rounds_used = 2 * N;
    return out;
}

PhaseReport isa2(const ProphetPlayFn& play, std::int64_t T, const Interval& interval,
                 const EmpiricalCdf& fhat1, double epsilon, double c_explore,
                 std::int64_t max_rounds) {
    require_unit_interval(interval);
    if (!(epsilon > std::pow(static_cast<double>(T), -0.5)))
        throw std::invalid_argument("accuracy must exceed T^{-1/2}");

    const std::int64_t k = explore_round_count(T, c_explore, epsilon);
    std::int64_t budget = max_rounds < 0 ? 2 * k : max_rounds;
    const std::int64_t k_lo = std::min(k, budget);
    budget -= k_lo;
    const std::int64_t k_hi = std::min(k, budget);

    PhaseReport report;
    report.epsilon = epsilon;
    report.rounds_used = k_lo + k_hi;
    report.refined.bounds = {interval};
    if (k_lo < k || k_hi < k) report.flags.push_back("truncated");

    const double r_lo = play_average(play, ProphetAction{{interval.lo}}, k_lo);
    const double r_hi = play_average(play, ProphetAction{{interval.hi}}, k_hi);
    if (k_lo == 0 || k_hi == 0) return report;  // nothing learnable this phase

    const double f_hi = fhat1.value(interval.hi);
    const double f_lo = fhat1.value(interval.lo);
    const double slope = f_hi - f_lo;
    const double intercept = -f_hi * interval.hi + f_lo * interval.lo +
                             fhat1.integral(interval.lo, interval.hi) - (r_hi - r_lo);

    const AffineRefinement ref =
        refine_with_affine_bound(slope, intercept, interval, 5.0 * epsilon, 5.0 * epsilon);
    report.refined.bounds = {ref.refined};
    if (ref.degenerate) report.flags.push_back("degenerate");
    append_trace(report, slope, intercept, interval);
    return report;
}

ProphetInitGeneral init_general(const ProphetPlayFn& play, int n, std::int64_t T, double c_init) {
    if (n < 2) throw std::invalid_argument("need at least two boxes");
    const std::int64_t N = init_sample_count(T, c_init, n);
    const double slack = std::pow(static_cast<double>(T), -0.25) / (10.0 * n);

    ProphetInitGeneral out;
    out.cdfs.product_error_budget = std::pow(static_cast<double>(T), -0.25);

    // Free samples of box b: skip everything before it, accept at it.
    for (int b = 0; b < n; ++b) {
        ProphetAction a;
        a.thresholds.assign(static_cast<std::size_t>(n - 1), 0.0);
        for (int j = 0; j < b; ++j) a.thresholds[static_cast<std::size_t>(j)] = kAbove;
        if (b == n - 1)
            for (double& t : a.thresholds) t = kAbove;
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(N));
        for (std::int64_t t = 0; t < N; ++t) samples.push_back(play(a));
        out.cdfs.fhat.emplace_back(std::move(samples), 0);
    }

    out.intervals.bounds.assign(static_cast<std::size_t>(n - 1), Interval{});
    for (int i = n - 1; i >= 1; --i) {
        // Play (skip, ..., skip, l_{i+1}, ..., l_{n-1}): the average estimates
        // the value of the already-built suffix.
        ProphetAction a;
        a.thresholds.assign(static_cast<std::size_t>(n - 1), 0.0);
        for (int j = 0; j < n - 1; ++j) {
            a.thresholds[static_cast<std::size_t>(j)] =
                j <= i - 1 ? kAbove : out.intervals.bounds[static_cast<std::size_t>(j)].lo;
        }
        const double mu = play_average(play, a, N);
        Interval& iv = out.intervals.bounds[static_cast<std::size_t>(i - 1)];
        iv.lo = clamp01(mu - slack);
        iv.hi = clamp01(mu + (2.0 * n - 2.0 * i - 1.0) * slack);
    }
    out.rounds_used = static_cast<std::int64_t>(2 * n - 1) * N;
    return out;
}

PhaseReport isa_general(const ProphetPlayFn& play, int n, std::int64_t T,
                        const ConfidenceIntervals& intervals, const CdfEstimates& cdfs,
                        double epsilon, double c_explore, std::int64_t max_rounds) {
    if (n < 2) throw std::invalid_argument("need at least two boxes");
    if (intervals.size() != n - 1)
        throw std::invalid_argument("expected one confidence interval per thresholded box");
    if (static_cast<int>(cdfs.fhat.size()) < n - 1)
        throw std::invalid_argument("missing distribution estimates");
    if (!(epsilon > 12.0 * std::pow(static_cast<double>(T), -0.5)))
        throw std::invalid_argument("accuracy must exceed 12*T^{-1/2}");
    for (const Interval& iv : intervals.bounds) require_unit_interval(iv);

    const std::int64_t k = explore_round_count(T, c_explore, epsilon);
    std::int64_t budget = max_rounds < 0 ? 2 * k * (n - 1) : max_rounds;

    PhaseReport report;
    report.epsilon = epsilon;
    report.refined = intervals;

    // reach_prob[i] = product of F_j(u_j) over j < i: the chance the round
    // survives the prefix played at upper bounds.
    std::vector<double> reach_prob(static_cast<std::size_t>(n - 1), 1.0);
    for (int i = 1; i < n - 1; ++i) {
        reach_prob[static_cast<std::size_t>(i)] =
            reach_prob[static_cast<std::size_t>(i - 1)] *
            cdfs.fhat[static_cast<std::size_t>(i - 1)].value(
                intervals.bounds[static_cast<std::size_t>(i - 1)].hi);
    }

    for (int i = n - 2; i >= 0; --i) {
        const Interval& box = intervals.bounds[static_cast<std::size_t>(i)];
        ProphetAction a;
        a.thresholds.assign(static_cast<std::size_t>(n - 1), 0.0);
        for (int j = 0; j < n - 1; ++j) {
            if (j < i) a.thresholds[static_cast<std::size_t>(j)] = intervals.bounds[static_cast<std::size_t>(j)].hi;
            else if (j > i) a.thresholds[static_cast<std::size_t>(j)] = report.refined.bounds[static_cast<std::size_t>(j)].lo;
        }

        const std::int64_t k_lo = std::min(k, budget);
        budget -= k_lo;
        a.thresholds[static_cast<std::size_t>(i)] = box.lo;
        const double r_lo = play_average(play, a, k_lo);

        const std::int64_t k_hi = std::min(k, budget);
        budget -= k_hi;
        a.thresholds[static_cast<std::size_t>(i)] = box.hi;
        const double r_hi = play_average(play, a, k_hi);

        report.rounds_used += k_lo + k_hi;
        if (k_lo < k || k_hi < k) {
            if (!report.has_flag("truncated")) report.flags.push_back("truncated");
            if (k_lo == 0 || k_hi == 0) continue;  // interval left unchanged
        }

        const EmpiricalCdf& fi = cdfs.fhat[static_cast<std::size_t>(i)];
        const double f_hi = fi.value(box.hi);
        const double f_lo = fi.value(box.lo);
        const double p = reach_prob[static_cast<std::size_t>(i)];
        const double slope = p * (f_hi - f_lo);
        const double intercept =
            p * (-f_hi * box.hi + f_lo * box.lo + fi.integral(box.lo, box.hi)) - (r_hi - r_lo);

        // One-based position i+1 gets cuts [-eps, (2n-2(i+1)-1)*eps].
        const double upper_cut = (2.0 * n - 2.0 * (i + 1) - 1.0) * epsilon;
        const AffineRefinement ref =
            refine_with_affine_bound(slope, intercept, box, epsilon, upper_cut);
        report.refined.bounds[static_cast<std::size_t>(i)] = ref.refined;
        if (ref.degenerate) report.flags.push_back("degenerate:" + std::to_string(i + 1));
        append_trace(report, slope, intercept, box);
    }
    return report;
}

} // namespace bandits
