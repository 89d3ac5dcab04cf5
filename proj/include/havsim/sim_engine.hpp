#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "havsim/behaviors.hpp"
#include "havsim/context_map.hpp"
#include "havsim/dubins.hpp"
#include "havsim/path_controller.hpp"
#include "havsim/scenario.hpp"

namespace havsim {

/// Everything tunable about one simulation run. Defaults mirror the study
/// configuration; every field is overridable through the experiment config.
struct SimParams {
    double dt{0.05};
    int grid_n_v{5};
    int grid_n_phi{5};
    MergeParams merge;
    ControllerParams controller;
    BehaviorParams behaviors;
    double goal_position_tolerance{0.8};
    double goal_heading_tolerance{0.2};
    double path_sample_step{0.1};
};

enum class RunOutcome { Success, Deadlock, Livelock };

const char* to_string(RunOutcome outcome);

struct Outcome {
    RunOutcome classification{RunOutcome::Livelock};
    long step_of_detection{0};
};

/// Post-step safety assertion failure: a committed state jackknifed or two
/// footprints overlapped. Unreachable by design; carries a diagnostic dump.
class SafetyViolation : public std::runtime_error {
public:
    explicit SafetyViolation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Per-HAV record of the last committed decision, kept for classification
/// and logging.
struct DecisionTrace {
    Action action;
    double blocked_fraction{0.0};
    bool all_forward_blocked{false};
    bool waiting{false};
    bool replanned{false};
};

struct HavRuntime {
    HavConfig config;
    HavState state;  // position in the unwrapped control frame
    double footprint{0.0};
    double turn_radius{0.0};

    std::optional<DubinsPath> path;
    std::vector<PathSample> samples;

    int goal_index{0};
    bool arrived{false};
    bool done{false};
    int standstill{0};
    DecisionTrace last;

    // Metric accumulators
    double traveled{0.0};
    long waiting_steps{0};
    double planned_length[2]{0.0, 0.0};
};

struct HavRunStats {
    int trailer_count{0};
    double traveled{0.0};
    double eligible_time{0.0};  // run duration minus goal-waiting time
    double planned_length{0.0};
    bool reached_both{false};
};

struct RunResult {
    Outcome outcome;
    long steps{0};
    std::uint64_t scenario_seed{0};
    std::vector<HavRunStats> hav_stats;
};

/// Synchronous decentralized simulation: every HAV decides against the same
/// start-of-step snapshot, then all states advance simultaneously.
class SimEngine {
public:
    SimEngine(const Scenario& scenario, const SimParams& params);

    /// Minimal-image observations of every other HAV within the
    /// communication radius, taken from current wrapped positions.
    std::vector<NeighborObservation> sense_neighbors(int ego_index) const;

    /// Full decision pipeline for one HAV against the current snapshot.
    /// Replans the Dubins path when needed (mutates only ego bookkeeping);
    /// HAVs waiting at a reached goal return the stand-still action without
    /// evaluating behaviors.
    Action decide(int ego_index);

    /// One synchronous step: all decide, all move, counters and goal logic
    /// update, then safety assertions run. Throws SafetyViolation if a
    /// committed state jackknifes or two footprints overlap.
    void step_world();

    /// Success / Deadlock / Livelock / nullopt (continue).
    std::optional<Outcome> classify(long max_steps) const;

    /// Run to termination with the given step budget.
    RunResult run(long max_steps);

    long step_count() const { return step_count_; }
    const std::vector<HavRuntime>& havs() const { return havs_; }
    const TorusWorld& world() const { return world_; }
    double communication_radius() const { return comm_radius_; }

    /// Optional per-step trajectory sink (CSV rows, see README).
    void set_trajectory_sink(std::ostream* sink) { trajectory_sink_ = sink; }
    static const char* trajectory_header();

private:
    void plan_to_goal(int ego_index);
    Pose current_goal(int ego_index) const;
    bool at_goal(int ego_index) const;
    void assert_safety() const;
    void log_trajectory_rows();

    SimParams params_;
    TorusWorld world_;
    ActionGrid grid_;
    std::vector<HavRuntime> havs_;
    std::vector<std::vector<Pose>> goals_;
    double comm_radius_{0.0};
    long step_count_{0};
    std::uint64_t scenario_seed_{0};
    std::ostream* trajectory_sink_{nullptr};
};

}  // namespace havsim
