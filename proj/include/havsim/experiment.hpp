#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "havsim/metrics.hpp"
#include "havsim/scenario.hpp"
#include "havsim/sim_engine.hpp"

namespace havsim {

enum class ExperimentMode { Single, Grid, ParamStudy };

const char* to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& name);

/// Batch experiment description. Grid mode runs the swarm-size x density
/// product; param-study mode varies one dotted parameter key over a value
/// list while holding the scenario set fixed across values.
struct ExperimentConfig {
    std::vector<int> swarm_sizes{5};
    std::vector<double> densities{0.12};
    int runs_per_cell{100};
    long max_steps{10000};
    std::uint64_t base_seed{1};
    int threads{1};
    bool log_trajectories{false};

    SimParams params;

    std::string study_key;             // param-study only
    std::vector<double> study_values;  // param-study only

    void validate(ExperimentMode mode) const;
};

/// One aggregation unit: a (swarm size, density) pair in grid mode, a
/// parameter value in param-study mode.
struct CellSpec {
    std::string name;
    int swarm_size{0};
    double density{0.0};
    SimParams params;
};

struct CellResult {
    CellSpec spec;
    std::vector<RunResult> runs;        // ordered by run index
    AggregateSummary summary;           // over `runs`
    long generation_failures{0};        // scenarios skipped at the rejection cap
    long safety_violations{0};          // engine assertion trips (should be zero)
    std::vector<std::string> safety_messages;
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    long total_runs{0};
    long total_safety_violations{0};
};

/// Deterministic per-run scenario seed. Param-study cells share seeds across
/// cells so every parameter value sees the identical scenario set.
std::uint64_t scenario_seed(std::uint64_t base_seed, std::size_t cell_index, int run_index,
                            bool shared_scenarios);

/// Apply "dotted.key=value" overrides onto the JSON form of SimParams.
/// Unknown keys throw std::invalid_argument.
SimParams apply_param_override(const SimParams& params, const std::string& dotted_key,
                               double value);

/// JSON round trip for configs (used by the manifest and the CLI).
std::string experiment_config_to_json(const ExperimentConfig& config, ExperimentMode mode);
ExperimentMode experiment_config_from_json(const std::string& text, ExperimentConfig& config);

/// Execute all cells over a worker pool; results merge by (cell, run index).
/// When out_dir is nonempty, writes <out>/<cell>/runs.csv, summary.txt and
/// <out>/manifest.txt (plus per-run trajectories when enabled).
ExperimentResult run_experiment(const ExperimentConfig& config, ExperimentMode mode,
                                const std::string& out_dir);

/// Shortest-round-trip double formatting used for all file output.
std::string fmt_double(double value);

}  // namespace havsim
