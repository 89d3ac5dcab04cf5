// Batch experiment runner for the articulated-vehicle swarm simulator.
//
// Subcommands:
//   run          one cell (single swarm size / density), scenario saved
//   grid         swarm-size x density grid
//   param-study  one-at-a-time parameter sweep over a shared scenario set
//   replay       re-execute a manifest byte-identically into a new directory
//
// Exit codes: 0 = all runs executed, 1 = configuration error, 2 = a safety
// assertion tripped during simulation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "havsim/experiment.hpp"

namespace {

using namespace havsim;

struct CliOptions {
    ExperimentConfig config;
    std::string out_dir{"out"};
    std::vector<std::string> overrides;
    std::string config_file;
    std::string manifest_path;
};

void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides) {
    for (const auto& text : overrides) {
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override must look like key.path=value: " + text);
        const std::string key = text.substr(0, eq);
        const double value = std::stod(text.substr(eq + 1));
        config.params = apply_param_override(config.params, key, value);
    }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    experiment_config_from_json(ss.str(), config);
}

int finish(const ExperimentResult& result, const std::string& out_dir) {
    long failures = 0;
    for (const auto& cell : result.cells) {
        const auto& s = cell.summary;
        std::printf("%-24s runs=%-4ld success=%5.1f%% deadlock=%5.1f%% livelock=%5.1f%% "
                    "speed=%.3f dev=%.3f genfail=%ld\n",
                    cell.spec.name.c_str(), s.runs, 100.0 * s.success_rate,
                    100.0 * s.deadlock_rate, 100.0 * s.livelock_rate, s.mean_speed,
                    s.mean_deviation, cell.generation_failures);
        failures += cell.generation_failures;
        for (const auto& msg : cell.safety_messages) std::fprintf(stderr, "SAFETY: %s\n", msg.c_str());
    }
    if (!out_dir.empty()) std::printf("outputs written to %s\n", out_dir.c_str());
    if (result.total_safety_violations > 0) {
        std::fprintf(stderr, "safety assertions tripped: %ld\n", result.total_safety_violations);
        return 2;
    }
    return 0;
}

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--seed", opt.config.base_seed, "base seed for scenario generation");
    cmd->add_option("--runs", opt.config.runs_per_cell, "runs per cell");
    cmd->add_option("--max-steps", opt.config.max_steps, "step budget per run");
    cmd->add_option("--threads", opt.config.threads, "worker threads");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--set", opt.overrides, "parameter override, e.g. behaviors.evade_weight=1.5")
        ->take_all();
    cmd->add_option("--config", opt.config_file, "JSON config file (overrides come after)");
    cmd->add_flag("--log-trajectories", opt.config.log_trajectories,
                  "write per-run trajectory CSVs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"articulated-vehicle swarm batch simulator"};
    app.require_subcommand(1);

    CliOptions opt;
    opt.config.runs_per_cell = 1;

    auto* cmd_run = app.add_subcommand("run", "run one cell and save its scenarios");
    int nh = 5;
    double rho = 0.12;
    cmd_run->add_option("--nh", nh, "swarm size");
    cmd_run->add_option("--rho", rho, "collision density fraction");
    add_common(cmd_run, opt);

    auto* cmd_grid = app.add_subcommand("grid", "swarm-size x density grid");
    std::vector<int> nh_list{2, 5, 10};
    std::vector<double> rho_list{0.05, 0.15, 0.25};
    cmd_grid->add_option("--nh", nh_list, "swarm sizes")->take_all();
    cmd_grid->add_option("--rho", rho_list, "collision densities")->take_all();
    add_common(cmd_grid, opt);

    auto* cmd_study = app.add_subcommand("param-study", "one-parameter sweep, shared scenarios");
    std::string study_key;
    std::vector<double> study_values;
    int study_nh = 5;
    double study_rho = 0.12;
    cmd_study->add_option("--key", study_key, "dotted parameter key")->required();
    cmd_study->add_option("--values", study_values, "values to sweep")->required()->take_all();
    cmd_study->add_option("--nh", study_nh, "swarm size");
    cmd_study->add_option("--rho", study_rho, "collision density fraction");
    add_common(cmd_study, opt);

    auto* cmd_replay = app.add_subcommand("replay", "re-execute a manifest");
    cmd_replay->add_option("manifest", opt.manifest_path, "path to manifest.txt")->required();
    cmd_replay->add_option("--out", opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(cmd_replay)) {
            std::ifstream in(opt.manifest_path, std::ios::binary);
            if (!in) throw std::invalid_argument("cannot open manifest: " + opt.manifest_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            ExperimentConfig config;
            const ExperimentMode mode = experiment_config_from_json(ss.str(), config);
            return finish(run_experiment(config, mode, opt.out_dir), opt.out_dir);
        }

        if (!opt.config_file.empty()) load_config_file(opt.config, opt.config_file);

        ExperimentMode mode = ExperimentMode::Single;
        if (app.got_subcommand(cmd_run)) {
            mode = ExperimentMode::Single;
            opt.config.swarm_sizes = {nh};
            opt.config.densities = {rho};
        } else if (app.got_subcommand(cmd_grid)) {
            mode = ExperimentMode::Grid;
            opt.config.swarm_sizes = nh_list;
            opt.config.densities = rho_list;
            if (!cmd_grid->count("--max-steps") && opt.config_file.empty())
                opt.config.max_steps = 20000;
        } else if (app.got_subcommand(cmd_study)) {
            mode = ExperimentMode::ParamStudy;
            opt.config.swarm_sizes = {study_nh};
            opt.config.densities = {study_rho};
            opt.config.study_key = study_key;
            opt.config.study_values = study_values;
        }
        apply_overrides(opt.config, opt.overrides);

        const auto result = run_experiment(opt.config, mode, opt.out_dir);

        if (app.got_subcommand(cmd_run)) {
            // Persist the generated scenarios alongside the results; runs
            // whose generation hit the rejection cap are already counted.
            for (int r = 0; r < opt.config.runs_per_cell; ++r) {
                try {
                    const auto seed = scenario_seed(opt.config.base_seed, 0, r, false);
                    const auto scenario =
                        sample_scenario(seed, opt.config.swarm_sizes[0], opt.config.densities[0]);
                    std::ostringstream name;
                    name << opt.out_dir << "/scenario_run" << r << ".json";
                    save_scenario(scenario, name.str());
                } catch (const std::runtime_error&) {
                }
            }
        }
        return finish(result, opt.out_dir);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
