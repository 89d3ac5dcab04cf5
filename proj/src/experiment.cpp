#include "havsim/experiment.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace havsim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Single: return "run";
        case ExperimentMode::Grid: return "grid";
        case ExperimentMode::ParamStudy: return "param-study";
    }
    return "unknown";
}

ExperimentMode experiment_mode_from_string(const std::string& name) {
    if (name == "run" || name == "single") return ExperimentMode::Single;
    if (name == "grid") return ExperimentMode::Grid;
    if (name == "param-study") return ExperimentMode::ParamStudy;
    throw std::invalid_argument("unknown experiment mode: " + name);
}

std::string fmt_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

void ExperimentConfig::validate(ExperimentMode mode) const {
    if (runs_per_cell < 1) throw std::invalid_argument("config: runs_per_cell must be >= 1");
    if (max_steps < 1) throw std::invalid_argument("config: max_steps must be >= 1");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (swarm_sizes.empty()) throw std::invalid_argument("config: swarm_sizes must be nonempty");
    for (int n : swarm_sizes)
        if (n < 1) throw std::invalid_argument("config: swarm sizes must be >= 1");
    if (densities.empty()) throw std::invalid_argument("config: densities must be nonempty");
    for (double rho : densities)
        if (!(rho > 0.0) || rho > 0.5)
            throw std::invalid_argument("config: densities must lie in (0, 0.5]");
    if (mode == ExperimentMode::ParamStudy) {
        if (study_key.empty() || study_values.empty())
            throw std::invalid_argument("config: param-study needs study_key and study_values");
    }
    if (params.dt <= 0.0) throw std::invalid_argument("config: dt must be > 0");
    if (params.grid_n_phi % 2 == 0 || params.grid_n_phi < 3)
        throw std::invalid_argument("config: grid_n_phi must be odd and >= 3");
    if (params.grid_n_v < 2) throw std::invalid_argument("config: grid_n_v must be >= 2");
}

// ---------------------------------------------------------------------------
// SimParams <-> JSON

namespace {

ordered_json params_to_json(const SimParams& p) {
    ordered_json j;
    j["dt"] = p.dt;
    j["grid_n_v"] = p.grid_n_v;
    j["grid_n_phi"] = p.grid_n_phi;
    j["goal_position_tolerance"] = p.goal_position_tolerance;
    j["goal_heading_tolerance"] = p.goal_heading_tolerance;
    j["path_sample_step"] = p.path_sample_step;
    j["merge"] = {{"danger_threshold", p.merge.danger_threshold},
                  {"interp_n_v", p.merge.interp_n_v},
                  {"interp_n_phi", p.merge.interp_n_phi}};
    j["controller"] = {{"lookahead_factor", p.controller.lookahead_factor},
                       {"cross_track_gain", p.controller.cross_track_gain},
                       {"replan_threshold", p.controller.replan_threshold}};
    j["behaviors"] = {{"sigma_phi", p.behaviors.sigma_phi},
                      {"sigma_v", p.behaviors.sigma_v},
                      {"collision_lookahead", p.behaviors.collision_lookahead},
                      {"evade_lookahead", p.behaviors.evade_lookahead},
                      {"evade_bound", p.behaviors.evade_bound},
                      {"evade_exponent", p.behaviors.evade_exponent},
                      {"goal_weight", p.behaviors.goal_weight},
                      {"straighten_weight", p.behaviors.straighten_weight},
                      {"evade_weight", p.behaviors.evade_weight},
                      {"progress_weight", p.behaviors.progress_weight},
                      {"progress_period", p.behaviors.progress_period},
                      {"progress_increment", p.behaviors.progress_increment}};
    return j;
}

SimParams params_from_json(const json& j) {
    SimParams p;
    p.dt = j.at("dt").get<double>();
    p.grid_n_v = j.at("grid_n_v").get<int>();
    p.grid_n_phi = j.at("grid_n_phi").get<int>();
    p.goal_position_tolerance = j.at("goal_position_tolerance").get<double>();
    p.goal_heading_tolerance = j.at("goal_heading_tolerance").get<double>();
    p.path_sample_step = j.at("path_sample_step").get<double>();
    const auto& m = j.at("merge");
    p.merge.danger_threshold = m.at("danger_threshold").get<double>();
    p.merge.interp_n_v = m.at("interp_n_v").get<int>();
    p.merge.interp_n_phi = m.at("interp_n_phi").get<int>();
    const auto& c = j.at("controller");
    p.controller.lookahead_factor = c.at("lookahead_factor").get<double>();
    p.controller.cross_track_gain = c.at("cross_track_gain").get<double>();
    p.controller.replan_threshold = c.at("replan_threshold").get<double>();
    const auto& b = j.at("behaviors");
    p.behaviors.sigma_phi = b.at("sigma_phi").get<double>();
    p.behaviors.sigma_v = b.at("sigma_v").get<double>();
    p.behaviors.collision_lookahead = b.at("collision_lookahead").get<double>();
    p.behaviors.evade_lookahead = b.at("evade_lookahead").get<double>();
    p.behaviors.evade_bound = b.at("evade_bound").get<double>();
    p.behaviors.evade_exponent = b.at("evade_exponent").get<double>();
    p.behaviors.goal_weight = b.at("goal_weight").get<double>();
    p.behaviors.straighten_weight = b.at("straighten_weight").get<double>();
    p.behaviors.evade_weight = b.at("evade_weight").get<double>();
    p.behaviors.progress_weight = b.at("progress_weight").get<double>();
    p.behaviors.progress_period = b.at("progress_period").get<int>();
    p.behaviors.progress_increment = b.at("progress_increment").get<double>();
    return p;
}

std::string cell_dir_name(const CellSpec& spec, ExperimentMode mode, const std::string& key) {
    std::ostringstream name;
    if (mode == ExperimentMode::ParamStudy) {
        std::string flat = key;
        for (auto& ch : flat)
            if (ch == '.') ch = '_';
        name << flat << '=' << spec.name;
    } else {
        name << "nh" << spec.swarm_size << "_rho" << fmt_double(spec.density);
    }
    return name.str();
}

}  // namespace

std::uint64_t scenario_seed(std::uint64_t base_seed, std::size_t cell_index, int run_index,
                            bool shared_scenarios) {
    const Rng root(base_seed);
    const std::uint64_t cell_tag =
        shared_scenarios ? 0x5EEDULL : 0xCE110000ULL + static_cast<std::uint64_t>(cell_index);
    return root.derive(cell_tag).derive(0x2000000ULL + static_cast<std::uint64_t>(run_index)).seed();
}

SimParams apply_param_override(const SimParams& params, const std::string& dotted_key,
                               double value) {
    ordered_json j = params_to_json(params);
    std::string pointer = "/" + dotted_key;
    for (auto& ch : pointer)
        if (ch == '.') ch = '/';
    const json::json_pointer ptr(pointer);
    json plain = j;
    if (!plain.contains(ptr))
        throw std::invalid_argument("unknown parameter key: " + dotted_key);
    if (plain.at(ptr).is_number_integer())
        plain[ptr] = static_cast<long>(value);
    else
        plain[ptr] = value;
    return params_from_json(plain);
}

std::string experiment_config_to_json(const ExperimentConfig& config, ExperimentMode mode) {
    ordered_json j;
    j["mode"] = to_string(mode);
    j["swarm_sizes"] = config.swarm_sizes;
    j["densities"] = config.densities;
    j["runs_per_cell"] = config.runs_per_cell;
    j["max_steps"] = config.max_steps;
    j["base_seed"] = config.base_seed;
    j["threads"] = config.threads;
    j["log_trajectories"] = config.log_trajectories;
    j["params"] = params_to_json(config.params);
    if (mode == ExperimentMode::ParamStudy) {
        j["study_key"] = config.study_key;
        j["study_values"] = config.study_values;
    }
    return j.dump(2) + "\n";
}

ExperimentMode experiment_config_from_json(const std::string& text, ExperimentConfig& config) {
    const json j = json::parse(text);
    const ExperimentMode mode = experiment_mode_from_string(j.at("mode").get<std::string>());
    config = ExperimentConfig{};
    config.swarm_sizes = j.at("swarm_sizes").get<std::vector<int>>();
    config.densities = j.at("densities").get<std::vector<double>>();
    config.runs_per_cell = j.at("runs_per_cell").get<int>();
    config.max_steps = j.at("max_steps").get<long>();
    config.base_seed = j.at("base_seed").get<std::uint64_t>();
    config.threads = j.at("threads").get<int>();
    config.log_trajectories = j.at("log_trajectories").get<bool>();
    config.params = params_from_json(j.at("params"));
    if (j.contains("study_key")) config.study_key = j.at("study_key").get<std::string>();
    if (j.contains("study_values"))
        config.study_values = j.at("study_values").get<std::vector<double>>();
    return mode;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

std::vector<CellSpec> build_cells(const ExperimentConfig& config, ExperimentMode mode) {
    std::vector<CellSpec> cells;
    if (mode == ExperimentMode::ParamStudy) {
        for (double value : config.study_values) {
            CellSpec spec;
            spec.name = fmt_double(value);
            spec.swarm_size = config.swarm_sizes.front();
            spec.density = config.densities.front();
            spec.params = apply_param_override(config.params, config.study_key, value);
            cells.push_back(std::move(spec));
        }
    } else {
        for (int n : config.swarm_sizes) {
            for (double rho : config.densities) {
                CellSpec spec;
                spec.swarm_size = n;
                spec.density = rho;
                spec.params = config.params;
                std::ostringstream name;
                name << "nh" << n << "_rho" << fmt_double(rho);
                spec.name = name.str();
                cells.push_back(std::move(spec));
            }
        }
    }
    return cells;
}

struct TaskOutcome {
    bool has_result{false};
    RunResult result;
    bool generation_failed{false};
    bool safety_violation{false};
    std::string message;
    std::string trajectory;  // CSV text when trajectory logging is on
};

void write_cell_outputs(const fs::path& cell_dir, const CellResult& cell,
                        const std::vector<TaskOutcome>& outcomes, bool log_trajectories) {
    fs::create_directories(cell_dir);

    std::ofstream csv(cell_dir / "runs.csv", std::ios::binary);
    csv << "run,seed,hav,trailers,outcome,steps,reached_both,traveled_m,eligible_s,"
           "avg_speed,planned_m,deviation\n";
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const auto& task = outcomes[r];
        if (!task.has_result) continue;
        const auto& run = task.result;
        for (std::size_t h = 0; h < run.hav_stats.size(); ++h) {
            const auto& hav = run.hav_stats[h];
            csv << r << ',' << run.scenario_seed << ',' << h << ',' << hav.trailer_count << ','
                << to_string(run.outcome.classification) << ',' << run.steps << ','
                << (hav.reached_both ? 1 : 0) << ',' << fmt_double(hav.traveled) << ','
                << fmt_double(hav.eligible_time) << ',';
            if (auto v = average_speed(hav)) csv << fmt_double(*v);
            csv << ',' << fmt_double(hav.planned_length) << ',' << fmt_double(path_deviation(hav))
                << '\n';
        }
        if (log_trajectories && !task.trajectory.empty()) {
            std::ostringstream name;
            name << "run" << r << "_trajectory.csv";
            std::ofstream traj(cell_dir / name.str(), std::ios::binary);
            traj << SimEngine::trajectory_header() << '\n' << task.trajectory;
        }
    }

    std::ofstream summary(cell_dir / "summary.txt", std::ios::binary);
    const auto& s = cell.summary;
    summary << "cell: " << cell.spec.name << "\n"
            << "swarm_size: " << cell.spec.swarm_size << "\n"
            << "density: " << fmt_double(cell.spec.density) << "\n"
            << "runs: " << s.runs << "\n"
            << "generation_failures: " << cell.generation_failures << "\n"
            << "safety_violations: " << cell.safety_violations << "\n"
            << "success: " << s.successes << " (" << fmt_double(100.0 * s.success_rate) << "%)\n"
            << "deadlock: " << s.deadlocks << " (" << fmt_double(100.0 * s.deadlock_rate)
            << "%)\n"
            << "livelock: " << s.livelocks << " (" << fmt_double(100.0 * s.livelock_rate)
            << "%)\n"
            << "mean_avg_speed_mps: " << fmt_double(s.mean_speed) << "\n"
            << "mean_path_deviation: " << fmt_double(s.mean_deviation) << "\n"
            << "mean_avg_speed_success_only: " << fmt_double(s.mean_speed_success_only) << "\n"
            << "mean_path_deviation_success_only: " << fmt_double(s.mean_deviation_success_only)
            << "\n"
            << "deadlock_affected_fraction: " << fmt_double(s.deadlock_affected.mean) << " +- "
            << fmt_double(s.deadlock_affected.half_width) << " (n=" << s.deadlock_affected.n
            << ")\n"
            << "livelock_affected_fraction: " << fmt_double(s.livelock_affected.mean) << " +- "
            << fmt_double(s.livelock_affected.half_width) << " (n=" << s.livelock_affected.n
            << ")\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, ExperimentMode mode,
                                const std::string& out_dir) {
    config.validate(mode);
    const bool shared = mode == ExperimentMode::ParamStudy;
    const auto cells = build_cells(config, mode);

    // Flat task list; results land in preassigned slots so output order never
    // depends on completion order.
    const std::size_t n_cells = cells.size();
    const std::size_t runs_per_cell = static_cast<std::size_t>(config.runs_per_cell);
    std::vector<std::vector<TaskOutcome>> outcomes(n_cells);
    for (auto& v : outcomes) v.resize(runs_per_cell);

    std::atomic<std::size_t> next_task{0};
    const std::size_t total_tasks = n_cells * runs_per_cell;

    auto worker = [&]() {
        while (true) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= total_tasks) return;
            const std::size_t cell_index = task / runs_per_cell;
            const int run_index = static_cast<int>(task % runs_per_cell);
            const auto& spec = cells[cell_index];
            TaskOutcome& slot = outcomes[cell_index][run_index];

            const std::uint64_t seed =
                scenario_seed(config.base_seed, cell_index, run_index, shared);
            try {
                const Scenario scenario = sample_scenario(seed, spec.swarm_size, spec.density);
                SimEngine engine(scenario, spec.params);
                std::ostringstream traj;
                if (config.log_trajectories) engine.set_trajectory_sink(&traj);
                slot.result = engine.run(config.max_steps);
                slot.has_result = true;
                if (config.log_trajectories) slot.trajectory = traj.str();
            } catch (const SafetyViolation& e) {
                slot.safety_violation = true;
                slot.message = e.what();
            } catch (const std::runtime_error& e) {
                slot.generation_failed = true;
                slot.message = e.what();
            }
        }
    };

    const int n_threads = std::max(1, config.threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.cells.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        CellResult cell;
        cell.spec = cells[c];
        for (const auto& task : outcomes[c]) {
            if (task.has_result) cell.runs.push_back(task.result);
            if (task.generation_failed) ++cell.generation_failures;
            if (task.safety_violation) {
                ++cell.safety_violations;
                cell.safety_messages.push_back(task.message);
            }
        }
        if (!cell.runs.empty()) cell.summary = aggregate(cell.runs);
        result.total_runs += static_cast<long>(cell.runs.size());
        result.total_safety_violations += cell.safety_violations;
        result.cells.push_back(std::move(cell));
    }

    if (!out_dir.empty()) {
        const fs::path root(out_dir);
        fs::create_directories(root);
        for (std::size_t c = 0; c < n_cells; ++c)
            write_cell_outputs(root / cell_dir_name(cells[c], mode, config.study_key),
                               result.cells[c], outcomes[c], config.log_trajectories);
        std::ofstream manifest(root / "manifest.txt", std::ios::binary);
        manifest << experiment_config_to_json(config, mode);
    }
    return result;
}

}  // namespace havsim
