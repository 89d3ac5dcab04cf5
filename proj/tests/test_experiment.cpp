#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "havsim/experiment.hpp"

using namespace havsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("parameter override by dotted key") {
    SimParams p;
    auto q = apply_param_override(p, "behaviors.evade_weight", 3.5);
    CHECK(q.behaviors.evade_weight == doctest::Approx(3.5));
    CHECK(p.behaviors.evade_weight == doctest::Approx(2.0));

    auto r = apply_param_override(p, "grid_n_v", 7.0);
    CHECK(r.grid_n_v == 7);

    CHECK_THROWS_AS(apply_param_override(p, "behaviors.no_such_knob", 1.0),
                    std::invalid_argument);
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig c;
    c.swarm_sizes = {2, 5};
    c.densities = {0.05, 0.25};
    c.runs_per_cell = 3;
    c.max_steps = 500;
    c.base_seed = 99;
    c.params.behaviors.evade_weight = 1.25;

    const auto text = experiment_config_to_json(c, ExperimentMode::Grid);
    ExperimentConfig d;
    const auto mode = experiment_config_from_json(text, d);
    CHECK(mode == ExperimentMode::Grid);
    CHECK(d.swarm_sizes == c.swarm_sizes);
    CHECK(d.densities == c.densities);
    CHECK(d.base_seed == 99);
    CHECK(d.params.behaviors.evade_weight == doctest::Approx(1.25));
    CHECK(experiment_config_to_json(d, mode) == text);
}

TEST_CASE("config validation catches bad values") {
    ExperimentConfig c;
    c.runs_per_cell = 0;
    CHECK_THROWS_AS(c.validate(ExperimentMode::Grid), std::invalid_argument);
    c = {};
    c.densities = {0.9};
    CHECK_THROWS_AS(c.validate(ExperimentMode::Grid), std::invalid_argument);
    c = {};
    CHECK_THROWS_AS(c.validate(ExperimentMode::ParamStudy), std::invalid_argument);
    c = {};
    c.params.grid_n_phi = 4;
    CHECK_THROWS_AS(c.validate(ExperimentMode::Grid), std::invalid_argument);
}

TEST_CASE("param-study cells share scenario seeds, grid cells do not") {
    CHECK(scenario_seed(1, 0, 5, true) == scenario_seed(1, 3, 5, true));
    CHECK(scenario_seed(1, 0, 5, false) != scenario_seed(1, 3, 5, false));
    CHECK(scenario_seed(1, 0, 5, true) != scenario_seed(1, 0, 6, true));
    CHECK(scenario_seed(1, 0, 5, true) != scenario_seed(2, 0, 5, true));

    // Identical scenario bytes across study cells for the same run index.
    const auto s1 = to_text(sample_scenario(scenario_seed(7, 0, 2, true), 3, 0.12));
    const auto s2 = to_text(sample_scenario(scenario_seed(7, 4, 2, true), 3, 0.12));
    CHECK(s1 == s2);
}

TEST_CASE("small grid experiment writes deterministic outputs") {
    ExperimentConfig c;
    c.swarm_sizes = {1, 2};
    c.densities = {0.1};
    c.runs_per_cell = 2;
    c.max_steps = 800;
    c.base_seed = 4242;
    c.threads = 2;

    TempDir dir_a("havsim_test_exp_a");
    TempDir dir_b("havsim_test_exp_b");
    auto ra = run_experiment(c, ExperimentMode::Grid, dir_a.path.string());
    auto rb = run_experiment(c, ExperimentMode::Grid, dir_b.path.string());

    CHECK(ra.total_runs == 4);
    CHECK(ra.total_safety_violations == 0);
    REQUIRE(ra.cells.size() == 2);
    CHECK(ra.cells[0].spec.swarm_size == 1);
    CHECK(ra.cells[1].spec.swarm_size == 2);

    for (const char* leaf : {"nh1_rho0.1/runs.csv", "nh1_rho0.1/summary.txt",
                             "nh2_rho0.1/runs.csv", "nh2_rho0.1/summary.txt", "manifest.txt"}) {
        CAPTURE(leaf);
        CHECK(slurp(dir_a.path / leaf) == slurp(dir_b.path / leaf));
    }
}

TEST_CASE("replaying a manifest reproduces byte-identical outputs") {
    ExperimentConfig c;
    c.swarm_sizes = {2};
    c.densities = {0.15};
    c.runs_per_cell = 2;
    c.max_steps = 600;
    c.base_seed = 31337;
    c.log_trajectories = true;

    TempDir first("havsim_test_replay_a");
    TempDir second("havsim_test_replay_b");
    run_experiment(c, ExperimentMode::Grid, first.path.string());

    ExperimentConfig replayed;
    const auto mode = experiment_config_from_json(slurp(first.path / "manifest.txt"), replayed);
    run_experiment(replayed, mode, second.path.string());

    for (const auto& entry : fs::recursive_directory_iterator(first.path)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), first.path);
        CAPTURE(rel.string());
        CHECK(slurp(entry.path()) == slurp(second.path / rel));
    }
}

TEST_CASE("param-study mode produces one cell per value with the override applied") {
    ExperimentConfig c;
    c.swarm_sizes = {2};
    c.densities = {0.1};
    c.runs_per_cell = 1;
    c.max_steps = 300;
    c.base_seed = 5;
    c.study_key = "behaviors.evade_weight";
    c.study_values = {1.0, 2.0};

    TempDir dir("havsim_test_study");
    auto result = run_experiment(c, ExperimentMode::ParamStudy, dir.path.string());
    REQUIRE(result.cells.size() == 2);
    CHECK(result.cells[0].spec.params.behaviors.evade_weight == doctest::Approx(1.0));
    CHECK(result.cells[1].spec.params.behaviors.evade_weight == doctest::Approx(2.0));
    CHECK(fs::exists(dir.path / "behaviors_evade_weight=1" / "runs.csv"));
    CHECK(fs::exists(dir.path / "behaviors_evade_weight=2" / "summary.txt"));
}
