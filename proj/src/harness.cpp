#include "bandits/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "bandits/environment.hpp"
#include "bandits/oracle.hpp"

namespace bandits {

namespace {

void append_double(std::string& out, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, res.ptr);
}

std::string format_double(double x) {
    std::string s;
    append_double(s, x);
    return s;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

// Interns actions as digests and keeps the oracle regret of each distinct
// action, so a million-round trace stores one int per round.
struct ActionTable {
    std::map<std::string, int> ids;
    std::vector<double> regret;

    template <typename RegretFn>
    int intern(RegretTrace& trace, std::string digest, const RegretFn& oracle_regret) {
        auto [it, fresh] = ids.try_emplace(std::move(digest), static_cast<int>(trace.actions.size()));
        if (fresh) {
            trace.actions.push_back(it->first);
            regret.push_back(oracle_regret());
        }
        return it->second;
    }
};

void append_row_flags(RegretTrace& trace, std::int64_t where,
                      const std::vector<std::string>& flags) {
    if (flags.empty()) return;
    std::string& slot = trace.row_flags[where];
    if (!slot.empty()) slot.push_back(';');
    slot += join(flags, ';');
}

// Assigns phase/epsilon labels by slicing the round log along the schedule
// (play calls happen in schedule order: init, phases, tail), then fills the
// regret columns. Kahan summation keeps the cumulative column usable for the
// accounting identity even at long horizons.
void finalize_trace(RegretTrace& trace, const DoublingReport* rep,
                    const std::vector<double>& action_regret, std::int64_t T) {
    if (trace.size() != T)
        throw std::logic_error("run_experiment: round log does not cover the horizon");
    trace.phase.assign(T, 0);
    trace.epsilon.assign(T, 0.0);
    if (rep != nullptr) {
        std::int64_t pos = rep->rounds_init;
        const int phases = static_cast<int>(rep->phases.size());
        for (int i = 0; i < phases; ++i) {
            const PhaseRecord& ph = rep->phases[i];
            for (std::int64_t r = 0; r < ph.rounds_used; ++r) {
                trace.phase[pos + r] = i + 1;
                trace.epsilon[pos + r] = ph.epsilon;
            }
            pos += ph.rounds_used;
            // A phase outcome labels the last round it touched; a zero-round
            // phase labels the most recent round instead.
            if (!ph.flags.empty() && T > 0)
                append_row_flags(trace, std::min(std::max<std::int64_t>(pos - 1, 0), T - 1),
                                 ph.flags);
        }
        for (std::int64_t r = pos; r < T; ++r) trace.phase[r] = phases + 1;
    }
    trace.regret.resize(T);
    trace.cum_regret.resize(T);
    double sum = 0.0;
    double comp = 0.0;
    for (std::int64_t i = 0; i < T; ++i) {
        const double g = action_regret[trace.action_id[i]];
        trace.regret[i] = g;
        const double y = g - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        trace.cum_regret[i] = sum;
    }
}

SearchMode parse_search_mode(const std::string& mode) {
    if (mode == "exact") return SearchMode::kExact;
    if (mode == "approx") return SearchMode::kApprox;
    throw std::invalid_argument("run_experiment: unknown search mode " + mode);
}

nlohmann::ordered_json snapshot_json(int phase, double epsilon,
                                     const ConfidenceIntervals& intervals,
                                     const std::set<std::pair<int, int>>& edges,
                                     const std::vector<std::string>& flags) {
    nlohmann::ordered_json j;
    j["phase"] = phase;
    j["epsilon"] = epsilon;
    nlohmann::ordered_json iv = nlohmann::ordered_json::array();
    for (const Interval& b : intervals.bounds) iv.push_back({b.lo, b.hi});
    j["intervals"] = std::move(iv);
    nlohmann::ordered_json ed = nlohmann::ordered_json::array();
    for (const auto& [a, b] : edges) ed.push_back({a, b});
    j["edges"] = std::move(ed);
    j["flags"] = flags;
    return j;
}

} // namespace

std::string prophet_action_digest(const ProphetAction& action) {
    std::string out;
    for (std::size_t i = 0; i < action.thresholds.size(); ++i) {
        if (i) out.push_back(';');
        append_double(out, action.thresholds[i]);
    }
    return out;
}

std::string pandora_policy_digest(const PandoraPolicy& policy) {
    std::string out;
    for (std::size_t i = 0; i < policy.order.size(); ++i) {
        if (i) out.push_back('|');
        out += std::to_string(policy.order[i]);
    }
    out.push_back(':');
    for (std::size_t i = 0; i < policy.thresholds.size(); ++i) {
        if (i) out.push_back(';');
        append_double(out, policy.thresholds[i]);
    }
    return out;
}

TraceRow RegretTrace::row(std::int64_t i) const {
    TraceRow r;
    r.t = i + 1;
    r.phase = phase[i];
    r.epsilon = epsilon[i];
    r.action = actions[action_id[i]];
    r.reward = reward[i];
    r.regret = regret[i];
    r.cum_regret = cum_regret[i];
    const auto it = row_flags.find(i);
    if (it != row_flags.end()) r.flags = it->second;
    return r;
}

LearnerConfig ExperimentConfig::learner_config() const {
    if (preset.empty()) return LearnerConfig{T, c_init, c_explore, c_estimate};
    if (preset == "desk") return LearnerConfig::desk(T);
    if (preset == "paper") return LearnerConfig::paper(T);
    throw std::invalid_argument("experiment config: unknown preset " + preset);
}

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["problem"] = problem;
    j["instance_path"] = instance_path;
    j["T"] = T;
    j["seed"] = seed;
    j["c_init"] = c_init;
    j["c_explore"] = c_explore;
    j["c_estimate"] = c_estimate;
    j["preset"] = preset;
    j["feedback"] = feedback;
    j["mode"] = mode;
    j["fixed_order"] = fixed_order;
    j["baseline"] = baseline;
    j["fixed_threshold"] = fixed_threshold;
    j["out_path"] = out_path;
    j["snapshot_path"] = snapshot_path;
    j["replicates"] = replicates;
    return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.problem = j.value("problem", c.problem);
    c.instance_path = j.value("instance_path", c.instance_path);
    c.T = j.value("T", c.T);
    c.seed = j.value("seed", c.seed);
    c.c_init = j.value("c_init", c.c_init);
    c.c_explore = j.value("c_explore", c.c_explore);
    c.c_estimate = j.value("c_estimate", c.c_estimate);
    c.preset = j.value("preset", c.preset);
    c.feedback = j.value("feedback", c.feedback);
    c.mode = j.value("mode", c.mode);
    c.fixed_order = j.value("fixed_order", c.fixed_order);
    c.baseline = j.value("baseline", c.baseline);
    c.fixed_threshold = j.value("fixed_threshold", c.fixed_threshold);
    c.out_path = j.value("out_path", c.out_path);
    c.snapshot_path = j.value("snapshot_path", c.snapshot_path);
    c.replicates = j.value("replicates", c.replicates);
    return c;
}

RegretTrace run_prophet_experiment(const ProphetInstance& inst, const ExperimentConfig& cfg) {
    if (cfg.T < 1) throw std::invalid_argument("run_experiment: horizon must be positive");
    if (inst.n() < 2)
        throw std::invalid_argument("run_experiment: selection game needs at least two boxes");
    ProphetEnv env(inst, cfg.seed, parse_feedback_model(cfg.feedback));
    const ProphetOpt opt = prophet_opt(inst);

    RegretTrace trace;
    trace.opt = opt.value();
    ActionTable table;
    auto play = [&](const ProphetAction& a) {
        const double value = env.step(a).value;
        const int id = table.intern(trace, prophet_action_digest(a),
                                    [&] { return one_round_regret(inst, opt, a); });
        trace.action_id.push_back(id);
        trace.reward.push_back(value);
        return value;
    };

    DoublingReport schedule;
    const DoublingReport* labels = nullptr;
    if (cfg.baseline == "optimal" || cfg.baseline == "fixed") {
        const ProphetAction a =
            cfg.baseline == "optimal"
                ? opt.action()
                : ProphetAction{std::vector<double>(inst.n() - 1, cfg.fixed_threshold)};
        for (std::int64_t t = 0; t < cfg.T; ++t) play(a);
    } else if (!cfg.baseline.empty()) {
        throw std::invalid_argument("run_experiment: unknown baseline " + cfg.baseline);
    } else {
        const LearnerConfig lc = cfg.learner_config();
        ProphetBanditRun run =
            inst.n() == 2 ? run_prophet2_bandit(play, lc) : run_prophet_bandit(play, inst.n(), lc);
        schedule = std::move(run.schedule);
        labels = &schedule;
    }
    finalize_trace(trace, labels, table.regret, cfg.T);
    return trace;
}

PandoraExperimentOutput run_pandora_experiment(const PandoraInstance& inst,
                                               const ExperimentConfig& cfg) {
    if (cfg.T < 1) throw std::invalid_argument("run_experiment: horizon must be positive");
    if (inst.n() < 2)
        throw std::invalid_argument("run_experiment: inspection game needs at least two boxes");
    PandoraEnv env(inst, cfg.seed, parse_feedback_model(cfg.feedback));
    const WeitzmanPolicy wp = weitzman(inst);
    const double opt_value = pandora_expected_utility(inst, wp.policy).value;

    PandoraExperimentOutput out;
    RegretTrace& trace = out.trace;
    trace.opt = opt_value;
    ActionTable table;
    auto play = [&](const PandoraPolicy& p) {
        const double value = env.step(p).value;
        const int id = table.intern(trace, pandora_policy_digest(p), [&] {
            return opt_value - pandora_expected_utility(inst, p).value;
        });
        trace.action_id.push_back(id);
        trace.reward.push_back(value);
        return value;
    };

    DoublingReport schedule;
    const DoublingReport* labels = nullptr;
    if (cfg.baseline == "optimal" || cfg.baseline == "fixed") {
        PandoraPolicy p = wp.policy;
        if (cfg.baseline == "fixed") {
            p.order.resize(inst.n());
            for (int i = 0; i < inst.n(); ++i) p.order[i] = i;
            p.thresholds.assign(inst.n(), cfg.fixed_threshold);
        }
        for (std::int64_t t = 0; t < cfg.T; ++t) play(p);
    } else if (!cfg.baseline.empty()) {
        throw std::invalid_argument("run_experiment: unknown baseline " + cfg.baseline);
    } else if (cfg.fixed_order) {
        if (inst.n() != 2)
            throw std::invalid_argument("run_experiment: fixed-order game needs exactly two boxes");
        PandoraFixedBanditRun run = run_pandora2_bandit(play, inst.costs, cfg.learner_config());
        schedule = std::move(run.schedule);
        labels = &schedule;
        for (std::size_t i = 0; i < schedule.phases.size(); ++i) {
            out.snapshots.push_back(snapshot_json(static_cast<int>(i) + 1,
                                                  schedule.phases[i].epsilon,
                                                  run.phases[i].refined, {},
                                                  schedule.phases[i].flags)
                                        .dump());
        }
    } else {
        PandoraBanditRun run =
            run_pandora_bandit(play, inst.costs, cfg.learner_config(), parse_search_mode(cfg.mode));
        schedule = std::move(run.schedule);
        labels = &schedule;
        for (std::size_t i = 0; i < schedule.phases.size(); ++i) {
            // A budget-truncated phase leaves no report; the group is
            // whatever the previous phase left behind.
            const ConstraintGroup& g =
                i < run.phases.size() ? run.phases[i].group : run.group;
            out.snapshots.push_back(snapshot_json(static_cast<int>(i) + 1,
                                                  schedule.phases[i].epsilon, g.intervals,
                                                  g.order_constraints, schedule.phases[i].flags)
                                        .dump());
        }
    }
    finalize_trace(trace, labels, table.regret, cfg.T);
    return out;
}

RegretTrace run_experiment(const ExperimentConfig& cfg) {
    auto write_trace = [&](const RegretTrace& tr) {
        if (cfg.out_path.empty()) return;
        const bool jsonl = cfg.out_path.size() >= 6 &&
                           cfg.out_path.compare(cfg.out_path.size() - 6, 6, ".jsonl") == 0;
        emit(tr, jsonl ? "jsonl" : "csv", cfg.out_path);
    };
    if (cfg.problem == "prophet") {
        RegretTrace tr = run_prophet_experiment(load_prophet_instance_file(cfg.instance_path), cfg);
        write_trace(tr);
        return tr;
    }
    if (cfg.problem == "pandora") {
        PandoraExperimentOutput out =
            run_pandora_experiment(load_pandora_instance_file(cfg.instance_path), cfg);
        write_trace(out.trace);
        if (!cfg.snapshot_path.empty()) {
            std::ofstream os(cfg.snapshot_path, std::ios::binary);
            if (!os) throw std::runtime_error("run_experiment: cannot open " + cfg.snapshot_path);
            for (const std::string& line : out.snapshots) os << line << '\n';
        }
        return std::move(out.trace);
    }
    throw std::invalid_argument("run_experiment: unknown problem kind " + cfg.problem);
}

namespace {

template <typename RunOnce>
SweepFit sweep_core(const ExperimentConfig& cfg, const std::vector<std::int64_t>& horizons,
                    const RunOnce& run_once) {
    if (horizons.size() < 4)
        throw std::invalid_argument("sweep_and_fit: need at least four horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 2 || (i > 0 && horizons[i] <= horizons[i - 1]))
            throw std::invalid_argument("sweep_and_fit: horizons must be increasing");
    }
    const double r0 = static_cast<double>(horizons[1]) / static_cast<double>(horizons[0]);
    for (std::size_t i = 2; i < horizons.size(); ++i) {
        const double r = static_cast<double>(horizons[i]) / static_cast<double>(horizons[i - 1]);
        if (std::abs(r - r0) > 0.01 * r0)
            throw std::invalid_argument("sweep_and_fit: horizons must be geometrically spaced");
    }

    SweepFit fit;
    const int reps = std::max(1, cfg.replicates);
    for (const std::int64_t T : horizons) {
        std::vector<std::future<double>> workers;
        workers.reserve(reps);
        for (int rep = 0; rep < reps; ++rep) {
            workers.push_back(std::async(std::launch::async, [&, T, rep] {
                ExperimentConfig one = cfg;
                one.T = T;
                one.seed = cfg.seed + static_cast<std::uint64_t>(rep);
                one.out_path.clear();
                one.snapshot_path.clear();
                return run_once(one);
            }));
        }
        std::vector<double> finals;
        finals.reserve(reps);
        for (auto& w : workers) finals.push_back(w.get());
        double mean = 0.0;
        for (const double f : finals) mean += f;
        mean /= static_cast<double>(reps);
        double var = 0.0;
        for (const double f : finals) var += (f - mean) * (f - mean);
        const double sd = reps > 1 ? std::sqrt(var / static_cast<double>(reps - 1)) : 0.0;
        fit.points.push_back(SweepPoint{T, mean, sd});
    }

    bool nonpositive = false;
    for (const SweepPoint& p : fit.points) nonpositive = nonpositive || !(p.mean_regret > 0.0);
    fit.offset_applied = nonpositive;
    if (nonpositive) fit.flags.push_back("nonpositive_regret_offset");

    std::vector<double> xs(fit.points.size());
    std::vector<double> ys(fit.points.size());
    for (std::size_t i = 0; i < fit.points.size(); ++i) {
        xs[i] = std::log(static_cast<double>(fit.points[i].T));
        ys[i] = std::log(fit.points[i].mean_regret + (nonpositive ? 1.0 : 0.0));
    }
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    if (*ymax - *ymin <= 1e-12) {
        fit.degenerate = true;
        fit.flags.push_back("degenerate_fit");
    }
    double xbar = 0.0;
    double ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(xs.size());
    ybar /= static_cast<double>(ys.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.residuals.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.residuals[i] = ys[i] - (fit.slope * xs[i] + fit.intercept);
    return fit;
}

} // namespace

SweepFit sweep_prophet(const ProphetInstance& inst, const ExperimentConfig& cfg,
                       const std::vector<std::int64_t>& horizons) {
    return sweep_core(cfg, horizons, [&inst](const ExperimentConfig& one) {
        return run_prophet_experiment(inst, one).total_regret();
    });
}

SweepFit sweep_pandora(const PandoraInstance& inst, const ExperimentConfig& cfg,
                       const std::vector<std::int64_t>& horizons) {
    return sweep_core(cfg, horizons, [&inst](const ExperimentConfig& one) {
        return run_pandora_experiment(inst, one).trace.total_regret();
    });
}

SweepFit sweep_and_fit(const ExperimentConfig& cfg, const std::vector<std::int64_t>& horizons) {
    if (cfg.problem == "prophet")
        return sweep_prophet(load_prophet_instance_file(cfg.instance_path), cfg, horizons);
    if (cfg.problem == "pandora")
        return sweep_pandora(load_pandora_instance_file(cfg.instance_path), cfg, horizons);
    throw std::invalid_argument("sweep_and_fit: unknown problem kind " + cfg.problem);
}

AdversarialSummary adversarial_prophet_demo(std::int64_t T, std::uint64_t seed) {
    AdversarialSummary out;
    AdversarialProphetEnv hindsight(T, seed);
    double sum = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum += hindsight.step_hindsight();
    out.hindsight_mean = sum / static_cast<double>(T);

    AdversarialProphetEnv env(T, seed);
    double learner_sum = 0.0;
    auto play = [&](const ProphetAction& a) {
        const double r = env.step(a.thresholds[0]);
        learner_sum += r;
        return r;
    };
    run_prophet2_bandit(play, LearnerConfig::desk(T));
    out.learner_mean = learner_sum / static_cast<double>(T);
    return out;
}

AdversarialSummary adversarial_pandora_demo(std::int64_t T, std::uint64_t seed) {
    AdversarialSummary out;
    AdversarialPandoraEnv hindsight(T, seed);
    double sum = 0.0;
    for (std::int64_t t = 0; t < T; ++t) sum += hindsight.step_hindsight();
    out.hindsight_mean = sum / static_cast<double>(T);

    AdversarialPandoraEnv env(T, seed);
    double learner_sum = 0.0;
    auto play = [&](const PandoraPolicy& p) {
        const double r = env.step(p);
        learner_sum += r;
        return r;
    };
    run_pandora2_bandit(play, {AdversarialPandoraEnv::kCostBox0, AdversarialPandoraEnv::kCostBox1},
                        LearnerConfig::desk(T));
    out.learner_mean = learner_sum / static_cast<double>(T);
    return out;
}

const char kTraceCsvHeader[] = "t,phase,epsilon,action,reward,regret,cum_regret,flags";

void emit_csv(const RegretTrace& trace, std::ostream& os) {
    os << kTraceCsvHeader << '\n';
    std::string line;
    for (std::int64_t i = 0; i < trace.size(); ++i) {
        line.clear();
        line += std::to_string(i + 1);
        line.push_back(',');
        line += std::to_string(trace.phase[i]);
        line.push_back(',');
        append_double(line, trace.epsilon[i]);
        line.push_back(',');
        line += trace.actions[trace.action_id[i]];
        line.push_back(',');
        append_double(line, trace.reward[i]);
        line.push_back(',');
        append_double(line, trace.regret[i]);
        line.push_back(',');
        append_double(line, trace.cum_regret[i]);
        line.push_back(',');
        const auto it = trace.row_flags.find(i);
        if (it != trace.row_flags.end()) line += it->second;
        line.push_back('\n');
        os << line;
    }
}

void emit_jsonl(const RegretTrace& trace, std::ostream& os) {
    for (std::int64_t i = 0; i < trace.size(); ++i) {
        const TraceRow r = trace.row(i);
        nlohmann::ordered_json j;
        j["t"] = r.t;
        j["phase"] = r.phase;
        j["epsilon"] = r.epsilon;
        j["action"] = r.action;
        j["reward"] = r.reward;
        j["regret"] = r.regret;
        j["cum_regret"] = r.cum_regret;
        j["flags"] = r.flags;
        os << j.dump() << '\n';
    }
}

void emit(const RegretTrace& trace, const std::string& format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit: cannot open " + path);
    if (format == "csv") {
        emit_csv(trace, os);
    } else if (format == "jsonl") {
        emit_jsonl(trace, os);
    } else {
        throw std::invalid_argument("emit: unknown format " + format);
    }
    os.flush();
    if (!os.good()) throw std::runtime_error("emit: write failed for " + path);
}

namespace {

double parse_double_field(const std::string& s, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("parse_trace: bad ") + what + " field: " + s);
    return v;
}

std::int64_t parse_int_field(const std::string& s, const char* what) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("parse_trace: bad ") + what + " field: " + s);
    return v;
}

// Shared by both parsers: appends one parsed row and enforces t contiguity.
struct TraceBuilder {
    RegretTrace trace;
    std::map<std::string, int> ids;
    std::int64_t expect_t = 1;

    void add(std::int64_t t, std::int64_t phase, double epsilon, const std::string& action,
             double reward, double regret, double cum, const std::string& flags) {
        if (t != expect_t)
            throw std::invalid_argument("parse_trace: rounds must be contiguous from 1");
        ++expect_t;
        auto [it, fresh] = ids.try_emplace(action, static_cast<int>(trace.actions.size()));
        if (fresh) trace.actions.push_back(action);
        trace.action_id.push_back(it->second);
        trace.phase.push_back(static_cast<int>(phase));
        trace.epsilon.push_back(epsilon);
        trace.reward.push_back(reward);
        trace.regret.push_back(regret);
        trace.cum_regret.push_back(cum);
        if (!flags.empty()) trace.row_flags[trace.size() - 1] = flags;
    }
};

} // namespace

RegretTrace parse_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("parse_trace_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceCsvHeader)
        throw std::invalid_argument("parse_trace_csv: unexpected header: " + line);

    TraceBuilder b;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (f.size() != 8)
            throw std::invalid_argument("parse_trace_csv: expected 8 fields, got line: " + line);
        b.add(parse_int_field(f[0], "t"), parse_int_field(f[1], "phase"),
              parse_double_field(f[2], "epsilon"), f[3], parse_double_field(f[4], "reward"),
              parse_double_field(f[5], "regret"), parse_double_field(f[6], "cum_regret"), f[7]);
    }
    return std::move(b.trace);
}

RegretTrace parse_trace_jsonl(std::istream& is) {
    TraceBuilder b;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        b.add(j.at("t").get<std::int64_t>(), j.at("phase").get<std::int64_t>(),
              j.at("epsilon").get<double>(), j.at("action").get<std::string>(),
              j.at("reward").get<double>(), j.at("regret").get<double>(),
              j.at("cum_regret").get<double>(), j.at("flags").get<std::string>());
    }
    return std::move(b.trace);
}

} // namespace bandits
