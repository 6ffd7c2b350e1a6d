#include "bandits/doubling.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace bandits {

double DoublingConfig::epsilon_floor() const {
    const double t = static_cast<double>(T);
    return std::pow(static_cast<double>(n), 0.5 * alpha) * std::log(t) / std::sqrt(t);
}

DoublingReport run_doubling(const DoublingConfig& cfg, std::int64_t init_rounds,
                            const PhaseFn& phase, const TailFn& tail) {
    if (cfg.T < 2) throw std::invalid_argument("run_doubling: horizon must be at least 2");
    if (cfg.n < 1) throw std::invalid_argument("run_doubling: box count must be positive");
    if (!(cfg.alpha >= 0.0))
        throw std::invalid_argument("run_doubling: alpha must be nonnegative");
    if (init_rounds < 0 || init_rounds > cfg.T)
        throw std::invalid_argument("run_doubling: initialization does not fit in the horizon");

    DoublingReport report;
    report.rounds_init = init_rounds;
    std::int64_t remaining = cfg.T - init_rounds;
    const double floor = cfg.epsilon_floor();
    for (double eps = 1.0; eps > floor; eps *= 0.5) {
        PhaseOutcome out = phase(eps, remaining);
        if (out.rounds_used < 0 || out.rounds_used > remaining)
            throw std::logic_error("run_doubling: phase exceeded its round cap");
        remaining -= out.rounds_used;
        report.rounds_phases += out.rounds_used;
        report.truncated = report.truncated || out.truncated;
        report.phases.push_back(PhaseRecord{eps, out.rounds_used, std::move(out.flags)});
        if (report.truncated) break;
    }
    report.rounds_tail = remaining;
    tail(remaining);
    return report;
}

ProphetBanditRun run_prophet2_bandit(const ProphetPlayFn& play, const LearnerConfig& cfg) {
    ProphetInit2 init = init2(play, cfg.T, cfg.c_init);
    if (init.rounds_used > cfg.T)
        throw std::invalid_argument(
            "run_prophet2_bandit: initialization does not fit in the horizon");

    ProphetBanditRun run;
    Interval cur = init.interval;
    const DoublingConfig dc{cfg.T, 2, 0.0};
    auto phase = [&](double eps, std::int64_t cap) {
        PhaseReport r = isa2(play, cfg.T, cur, init.cdfs.fhat[0], eps, cfg.c_explore, cap);
        cur = r.refined.bounds[0];
        PhaseOutcome out{r.rounds_used, r.truncated(), r.flags};
        run.phases.push_back(std::move(r));
        return out;
    };
    auto tail = [&](std::int64_t rounds) {
        run.intervals = ConfidenceIntervals{{cur}};
        run.tail_action = ProphetAction{{cur.midpoint()}};
        for (std::int64_t t = 0; t < rounds; ++t) play(run.tail_action);
    };
    run.schedule = run_doubling(dc, init.rounds_used, phase, tail);
    return run;
}

ProphetBanditRun run_prophet_bandit(const ProphetPlayFn& play, int n, const LearnerConfig& cfg) {
    if (n < 2) throw std::invalid_argument("run_prophet_bandit: need at least two boxes");
    ProphetInitGeneral init = init_general(play, n, cfg.T, cfg.c_init);
    if (init.rounds_used > cfg.T)
        throw std::invalid_argument(
            "run_prophet_bandit: initialization does not fit in the horizon");

    ProphetBanditRun run;
    ConfidenceIntervals cur = init.intervals;
    const DoublingConfig dc{cfg.T, n, 5.0};
    auto phase = [&](double eps, std::int64_t cap) {
        PhaseReport r = isa_general(play, n, cfg.T, cur, init.cdfs, eps, cfg.c_explore, cap);
        cur = r.refined;
        PhaseOutcome out{r.rounds_used, r.truncated(), r.flags};
        run.phases.push_back(std::move(r));
        return out;
    };
    auto tail = [&](std::int64_t rounds) {
        run.intervals = cur;
        ProphetAction a;
        a.thresholds.reserve(cur.bounds.size());
        for (const Interval& iv : cur.bounds) a.thresholds.push_back(iv.midpoint());
        run.tail_action = std::move(a);
        for (std::int64_t t = 0; t < rounds; ++t) play(run.tail_action);
    };
    run.schedule = run_doubling(dc, init.rounds_used, phase, tail);
    return run;
}

PandoraFixedBanditRun run_pandora2_bandit(const PandoraPlayFn& play,
                                          const std::vector<double>& costs,
                                          const LearnerConfig& cfg) {
    if (costs.size() != 2)
        throw std::invalid_argument("run_pandora2_bandit: need exactly two costs");
    PandoraInit init = init_pandora(play, 2, cfg.T, cfg.c_init, costs);
    if (init.rounds_used > cfg.T)
        throw std::invalid_argument(
            "run_pandora2_bandit: initialization does not fit in the horizon");

    PandoraFixedBanditRun run;
    Interval cur = init.intervals.bounds[1];
    int generation = init.cdfs.generation;
    const DoublingConfig dc{cfg.T, 2, 0.0};
    auto phase = [&](double eps, std::int64_t cap) {
        const std::int64_t per_box = estimate_sample_count(cfg.T, cfg.c_estimate, eps, 2);
        if (cap < 2 * per_box) {
            PhaseReport skipped;
            skipped.epsilon = eps;
            skipped.refined = ConfidenceIntervals{{cur}};
            skipped.flags.push_back("truncated");
            run.phases.push_back(std::move(skipped));
            return PhaseOutcome{0, true, {"truncated"}};
        }
        CdfEstimates est = estimate_pandora_cdfs(play, costs, per_box, ++generation);
        PhaseReport r = isa_fixed_order(play, cfg.T, cur, est.fhat[0], est.fhat[1], eps,
                                        cfg.c_explore, cap - 2 * per_box);
        cur = r.refined.bounds[0];
        PhaseOutcome out{2 * per_box + r.rounds_used, r.truncated(), r.flags};
        run.phases.push_back(std::move(r));
        return out;
    };
    auto tail = [&](std::int64_t rounds) {
        run.interval = cur;
        run.tail_policy = PandoraPolicy{{0, 1}, {1.0, cur.midpoint()}};
        for (std::int64_t t = 0; t < rounds; ++t) play(run.tail_policy);
    };
    run.schedule = run_doubling(dc, init.rounds_used, phase, tail);
    return run;
}

PandoraBanditRun run_pandora_bandit(const PandoraPlayFn& play, const std::vector<double>& costs,
                                    const LearnerConfig& cfg, SearchMode mode) {
    const int n = static_cast<int>(costs.size());
    if (n < 2) throw std::invalid_argument("run_pandora_bandit: need at least two boxes");
    PandoraInit init = init_pandora(play, n, cfg.T, cfg.c_init, costs);
    if (init.rounds_used > cfg.T)
        throw std::invalid_argument(
            "run_pandora_bandit: initialization does not fit in the horizon");

    PandoraBanditRun run;
    run.group.intervals = init.intervals;
    const DoublingConfig dc{cfg.T, n, 5.0};
    const std::int64_t n64 = n;
    auto phase = [&](double eps, std::int64_t cap) {
        // pan_alg takes no round cap, so bound its spend up front: n fresh
        // estimate sweeps, two pbisa arms per box, two arms per swap test.
        const std::int64_t per_box = estimate_sample_count(cfg.T, cfg.c_estimate, eps, n);
        const std::int64_t k_pbisa = explore_round_count(cfg.T, cfg.c_explore, eps);
        const std::int64_t k_swap = explore_round_count(cfg.T, cfg.c_explore, n * eps);
        const std::int64_t budget =
            n64 * n64 * per_box + 2 * n64 * k_pbisa + 8 * n64 * n64 * n64 * k_swap;
        if (cap < budget) return PhaseOutcome{0, true, {"truncated"}};
        PanAlgReport pr = pan_alg(play, run.group, costs, eps, cfg, mode);
        run.group = pr.group;
        PhaseOutcome out{pr.rounds_used(), false, pr.flags};
        run.phases.push_back(std::move(pr));
        return out;
    };
    auto tail = [&](std::int64_t rounds) {
        run.tail_policy = canonical_policy(run.group);
        for (std::int64_t t = 0; t < rounds; ++t) play(run.tail_policy);
    };
    run.schedule = run_doubling(dc, init.rounds_used, phase, tail);
    return run;
}

} // namespace bandits
