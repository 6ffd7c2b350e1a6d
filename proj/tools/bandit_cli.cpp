#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bandits/harness.hpp"
#include "bandits/oracle.hpp"

using namespace bandits;

namespace {

// Relative output paths land in $BANDIT_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("BANDIT_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string full = dir;
    if (full.back() != '/') full.push_back('/');
    return full + path;
}

void add_run_flags(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--instance", cfg.instance_path, "instance file, one box per line")
        ->required();
    cmd->add_option("--horizon", cfg.T, "number of rounds")->required();
    cmd->add_option("--seed", cfg.seed, "environment seed");
    cmd->add_option("--c-init", cfg.c_init, "initialization sample constant");
    cmd->add_option("--c-explore", cfg.c_explore, "per-phase exploration constant");
    cmd->add_option("--c-estimate", cfg.c_estimate, "cdf estimation constant");
    cmd->add_option("--preset", cfg.preset, "constant preset, overrides the c-* flags")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--feedback", cfg.feedback, "feedback model")
        ->check(CLI::IsMember({"value", "index", "prefix"}));
    cmd->add_option("--baseline", cfg.baseline, "replay a baseline instead of the learner")
        ->check(CLI::IsMember({"optimal", "fixed"}));
    cmd->add_option("--fixed-threshold", cfg.fixed_threshold,
                    "threshold replayed by --baseline fixed");
    cmd->add_option("--out", cfg.out_path, "trace destination; .jsonl switches format");
}

void print_run_summary(const ExperimentConfig& cfg, const RegretTrace& trace) {
    double reward = 0.0;
    for (std::int64_t i = 0; i < trace.size(); ++i) reward += trace.reward[i];
    nlohmann::ordered_json j;
    j["problem"] = cfg.problem;
    j["T"] = cfg.T;
    j["seed"] = cfg.seed;
    j["opt"] = trace.opt;
    j["mean_reward"] = reward / static_cast<double>(trace.size());
    j["total_regret"] = trace.total_regret();
    if (!cfg.out_path.empty()) j["out"] = cfg.out_path;
    if (!cfg.snapshot_path.empty()) j["snapshots"] = cfg.snapshot_path;
    std::cout << j.dump() << '\n';
}

void print_oracle(const std::string& problem, const std::string& instance_path) {
    nlohmann::ordered_json j;
    j["problem"] = problem;
    if (problem == "prophet") {
        const ProphetInstance inst = load_prophet_instance_file(instance_path);
        const ProphetOpt opt = prophet_opt(inst);
        j["value"] = opt.value();
        j["thresholds"] = opt.opt_thresholds;
        j["continuation_values"] = opt.opt_values;
    } else {
        const PandoraInstance inst = load_pandora_instance_file(instance_path);
        const WeitzmanPolicy wp = weitzman(inst);
        const UtilityEstimate u = pandora_expected_utility(inst, wp.policy);
        j["value"] = u.value;
        if (!u.exact) j["value_std_error"] = u.std_error;
        j["reservation_values"] = wp.sigmas;
        j["order"] = wp.policy.order;
        j["thresholds"] = wp.policy.thresholds;
    }
    std::cout << j.dump() << '\n';
}

void print_sweep(const SweepFit& fit) {
    std::cout << "T,mean_regret,stddev\n";
    for (const SweepPoint& p : fit.points)
        std::cout << p.T << ',' << p.mean_regret << ',' << p.stddev << '\n';
    nlohmann::ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residuals"] = fit.residuals;
    j["offset_applied"] = fit.offset_applied;
    j["degenerate"] = fit.degenerate;
    j["flags"] = fit.flags;
    std::cout << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator for prophet selection and costly inspection bandits"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    CLI::App* run_prophet =
        app.add_subcommand("run-prophet", "run a threshold learner on a selection instance");
    add_run_flags(run_prophet, cfg);

    CLI::App* run_pandora =
        app.add_subcommand("run-pandora", "run an inspection learner on a costed instance");
    add_run_flags(run_pandora, cfg);
    run_pandora->add_option("--mode", cfg.mode, "refinement search: exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}));
    run_pandora->add_flag("--fixed-order", cfg.fixed_order,
                          "two-box game with the inspection order pinned");
    run_pandora->add_option("--snapshots", cfg.snapshot_path,
                            "per-phase interval/constraint snapshots (jsonl)");

    std::string oracle_problem = "prophet";
    std::string oracle_instance;
    CLI::App* oracle = app.add_subcommand("oracle", "print optimal values for an instance file");
    oracle->add_option("--problem", oracle_problem, "prophet or pandora")
        ->check(CLI::IsMember({"prophet", "pandora"}));
    oracle->add_option("--instance", oracle_instance, "instance file")->required();

    std::vector<std::int64_t> horizons;
    std::int64_t min_horizon = 0;
    std::int64_t max_horizon = 0;
    int factor = 2;
    CLI::App* sweep = app.add_subcommand("sweep", "fit the regret growth exponent over horizons");
    add_run_flags(sweep, cfg);
    sweep->get_option("--horizon")->required(false);
    sweep->add_option("--problem", cfg.problem, "prophet or pandora")
        ->check(CLI::IsMember({"prophet", "pandora"}));
    sweep->add_option("--mode", cfg.mode, "refinement search: exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}));
    sweep->add_flag("--fixed-order", cfg.fixed_order,
                    "two-box game with the inspection order pinned");
    sweep->add_option("--horizons", horizons, "explicit horizon list")->delimiter(',');
    sweep->add_option("--min-horizon", min_horizon, "first horizon of a geometric ladder");
    sweep->add_option("--max-horizon", max_horizon, "last horizon of a geometric ladder");
    sweep->add_option("--factor", factor, "ladder ratio")->check(CLI::PositiveNumber);
    sweep->add_option("--replicates", cfg.replicates, "runs per horizon, seeds seed+0..r-1")
        ->check(CLI::PositiveNumber);

    std::string game = "prophet";
    std::int64_t demo_T = 10000;
    std::uint64_t demo_seed = 1;
    CLI::App* demo = app.add_subcommand(
        "adversarial-demo", "hindsight threshold vs learner on an adaptive adversary");
    demo->add_option("--game", game, "prophet or pandora")
        ->check(CLI::IsMember({"prophet", "pandora"}));
    demo->add_option("--horizon", demo_T, "number of rounds");
    demo->add_option("--seed", demo_seed, "adversary seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.out_path = resolve_out(cfg.out_path);
        cfg.snapshot_path = resolve_out(cfg.snapshot_path);
        if (run_prophet->parsed()) {
            cfg.problem = "prophet";
            print_run_summary(cfg, run_experiment(cfg));
        } else if (run_pandora->parsed()) {
            cfg.problem = "pandora";
            print_run_summary(cfg, run_experiment(cfg));
        } else if (oracle->parsed()) {
            print_oracle(oracle_problem, oracle_instance);
        } else if (sweep->parsed()) {
            if (horizons.empty()) {
                if (min_horizon < 2 || max_horizon < min_horizon || factor < 2)
                    throw std::invalid_argument(
                        "sweep: give --horizons or --min-horizon/--max-horizon/--factor");
                for (std::int64_t T = min_horizon; T <= max_horizon; T *= factor)
                    horizons.push_back(T);
            }
            print_sweep(sweep_and_fit(cfg, horizons));
        } else if (demo->parsed()) {
            const AdversarialSummary s = game == "prophet"
                                             ? adversarial_prophet_demo(demo_T, demo_seed)
                                             : adversarial_pandora_demo(demo_T, demo_seed);
            nlohmann::ordered_json j;
            j["game"] = game;
            j["T"] = demo_T;
            j["seed"] = demo_seed;
            j["hindsight_mean"] = s.hindsight_mean;
            j["learner_mean"] = s.learner_mean;
            j["separation"] = s.hindsight_mean - s.learner_mean;
            std::cout << j.dump() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
