#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bandits/distribution.hpp"
#include "bandits/doubling.hpp"
#include "bandits/learner_core.hpp"

namespace bandits {

// Everything one experiment needs. A config plus the code version determines
// the emitted trace byte for byte; to_json/from_json round-trip every field.
struct ExperimentConfig {
    std::string problem = "prophet";  // prophet | pandora
    std::string instance_path;        // text format of the distributions module
    std::int64_t T = 0;
    std::uint64_t seed = 1;
    double c_init = 4.0;
    double c_explore = 4.0;
    double c_estimate = 64.0;
    std::string preset;              // "" | desk | paper; presets override the constants
    std::string feedback = "value";  // value | index | prefix
    std::string mode = "exact";      // pandora refinement search: exact | approx
    bool fixed_order = false;        // pandora: two-box fixed-order game
    std::string baseline;            // "" (learner) | optimal | fixed
    double fixed_threshold = 0.0;    // baseline=fixed: threshold used everywhere
    std::string out_path;            // trace destination; .jsonl extension switches format
    std::string snapshot_path;       // pandora per-phase group snapshots (jsonl)
    int replicates = 1;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    LearnerConfig learner_config() const;
};

struct TraceRow {
    std::int64_t t = 0;  // 1-based, contiguous
    int phase = 0;       // 0 init, 1.. shrinking phases, last+1 tail
    double epsilon = 0.0;
    std::string action;  // digest, see prophet_action_digest / pandora_policy_digest
    double reward = 0.0;
    double regret = 0.0;  // oracle one-round regret of the played action
    double cum_regret = 0.0;
    std::string flags;
};

// Column-oriented so million-round traces stay compact. Actions are interned
// digests; per-round flags are sparse (phase outcomes attach to the last
// round of their phase). Regret is the oracle expected shortfall of the
// played action, so it is noise-free; the realized reward sits next to it.
struct RegretTrace {
    std::vector<int> action_id;
    std::vector<double> reward;
    std::vector<int> phase;
    std::vector<double> epsilon;
    std::vector<double> regret;
    std::vector<double> cum_regret;
    std::map<std::int64_t, std::string> row_flags;  // 0-based row index
    std::vector<std::string> actions;               // digest per action id
    double opt = 0.0;  // oracle per-round optimum (metadata, not emitted)

    std::int64_t size() const { return static_cast<std::int64_t>(action_id.size()); }
    TraceRow row(std::int64_t i) const;
    double total_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
};

std::string prophet_action_digest(const ProphetAction& action);  // thresholds ';'-joined
std::string pandora_policy_digest(const PandoraPolicy& policy);  // "o|o|..:t;t;.."

// Wires environment + learner (or a baseline) and logs every round. The
// baseline "optimal" replays the oracle-optimal action; "fixed" replays
// cfg.fixed_threshold at every decision. Deterministic under cfg.seed.
RegretTrace run_prophet_experiment(const ProphetInstance& inst, const ExperimentConfig& cfg);

struct PandoraExperimentOutput {
    RegretTrace trace;
    // One JSON object per schedule phase: phase, epsilon, intervals,
    // constraint edges, flags.
    std::vector<std::string> snapshots;
};

PandoraExperimentOutput run_pandora_experiment(const PandoraInstance& inst,
                                               const ExperimentConfig& cfg);

// Loads cfg.instance_path, dispatches on cfg.problem, writes cfg.out_path
// and cfg.snapshot_path when set, and returns the trace.
RegretTrace run_experiment(const ExperimentConfig& cfg);

struct SweepPoint {
    std::int64_t T = 0;
    double mean_regret = 0.0;  // final cumulative regret, averaged over replicates
    double stddev = 0.0;
};

struct SweepFit {
    std::vector<SweepPoint> points;
    double slope = 0.0;  // least squares on ln(regret) vs ln(T)
    double intercept = 0.0;
    std::vector<double> residuals;
    bool offset_applied = false;  // ln(regret + 1) fallback for nonpositive means
    bool degenerate = false;      // all fitted ordinates equal
    std::vector<std::string> flags;
};

// Runs cfg.replicates experiments per horizon (seed = cfg.seed + replicate
// index, one worker per replicate) and fits the regret growth exponent.
// Requires at least four horizons in geometric progression (ratio constant
// to 1%).
SweepFit sweep_prophet(const ProphetInstance& inst, const ExperimentConfig& cfg,
                       const std::vector<std::int64_t>& horizons);
SweepFit sweep_pandora(const PandoraInstance& inst, const ExperimentConfig& cfg,
                       const std::vector<std::int64_t>& horizons);
SweepFit sweep_and_fit(const ExperimentConfig& cfg, const std::vector<std::int64_t>& horizons);

// Per-round means over one full horizon: the hindsight-optimal fixed
// threshold against the doubling learner, both on the same adversary draw.
// The gap reproduces the oblivious lower-bound separations.
struct AdversarialSummary {
    double hindsight_mean = 0.0;
    double learner_mean = 0.0;
};
AdversarialSummary adversarial_prophet_demo(std::int64_t T, std::uint64_t seed);
AdversarialSummary adversarial_pandora_demo(std::int64_t T, std::uint64_t seed);

// CSV columns exactly: t,phase,epsilon,action,reward,regret,cum_regret,flags.
// JSONL uses the same keys in the same order, one object per round. Doubles
// are printed in shortest round-trip form, so emit-parse-emit is stable.
extern const char kTraceCsvHeader[];
void emit_csv(const RegretTrace& trace, std::ostream& os);
void emit_jsonl(const RegretTrace& trace, std::ostream& os);
void emit(const RegretTrace& trace, const std::string& format, const std::string& path);
RegretTrace parse_trace_csv(std::istream& is);
RegretTrace parse_trace_jsonl(std::istream& is);

} // namespace bandits
