#include "havsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "havsim/angles.hpp"

namespace havsim {

const char* to_string(RunOutcome outcome) {
    switch (outcome) {
        case RunOutcome::Success: return "success";
        case RunOutcome::Deadlock: return "deadlock";
        case RunOutcome::Livelock: return "livelock";
    }
    return "unknown";
}

SimEngine::SimEngine(const Scenario& scenario, const SimParams& params)
    : params_(params),
      world_(scenario.world),
      grid_(0.0, 1.0, 2, 1.0, 3),  // placeholder, rebuilt below from the vehicle bounds
      scenario_seed_(scenario.seed) {
    if (scenario.havs.empty()) throw std::invalid_argument("SimEngine: empty scenario");
    if (scenario.starts.size() != scenario.havs.size() ||
        scenario.goal_sequences.size() != scenario.havs.size())
        throw std::invalid_argument("SimEngine: scenario pose/config count mismatch");
    for (const auto& goals : scenario.goal_sequences)
        if (goals.size() != 2)
            throw std::invalid_argument("SimEngine: each HAV needs exactly two goal poses");

    // All generated HAVs share the action bounds; the grid spans them.
    const auto& first = scenario.havs.front();
    for (const auto& cfg : scenario.havs) {
        cfg.validate();
        if (cfg.min_speed != first.min_speed || cfg.max_speed != first.max_speed ||
            cfg.max_steer != first.max_steer)
            throw std::invalid_argument("SimEngine: heterogeneous action bounds are unsupported");
    }
    grid_ = ActionGrid(first.min_speed, first.max_speed, params_.grid_n_v, first.max_steer,
                       params_.grid_n_phi);

    double max_footprint = 0.0;
    havs_.reserve(scenario.havs.size());
    for (std::size_t i = 0; i < scenario.havs.size(); ++i) {
        HavRuntime rt;
        rt.config = scenario.havs[i];
        rt.state = HavState::aligned(scenario.starts[i].position, scenario.starts[i].heading,
                                     rt.config.trailer_count());
        rt.footprint = footprint_radius(rt.config);
        rt.turn_radius = min_turning_radius(rt.config);
        max_footprint = std::max(max_footprint, rt.footprint);
        havs_.push_back(std::move(rt));
    }
    comm_radius_ = 2.0 * max_footprint + params_.behaviors.evade_bound;

    goals_ = scenario.goal_sequences;
}

std::vector<NeighborObservation> SimEngine::sense_neighbors(int ego_index) const {
    std::vector<NeighborObservation> out;
    const Vec2 ego_pos = wrap_point(havs_[ego_index].state.truck_rear_pos, world_);
    for (std::size_t h = 0; h < havs_.size(); ++h) {
        if (static_cast<int>(h) == ego_index) continue;
        const Vec2 rel =
            rel_vector(ego_pos, wrap_point(havs_[h].state.truck_rear_pos, world_), world_);
        if (norm(rel) <= comm_radius_) out.push_back({rel, havs_[h].footprint});
    }
    return out;
}

Pose SimEngine::current_goal(int ego_index) const {
    const auto& rt = havs_[ego_index];
    return goals_[ego_index][static_cast<std::size_t>(rt.goal_index)];
}

bool SimEngine::at_goal(int ego_index) const {
    const auto& rt = havs_[ego_index];
    const Pose goal = current_goal(ego_index);
    const double dist =
        torus_distance(wrap_point(rt.state.truck_rear_pos, world_), goal.position, world_);
    if (dist > params_.goal_position_tolerance) return false;
    return std::fabs(wrap_angle(rt.state.truck_heading - goal.heading)) <=
           params_.goal_heading_tolerance;
}

void SimEngine::plan_to_goal(int ego_index) {
    auto& rt = havs_[ego_index];
    const Pose goal = current_goal(ego_index);
    const Vec2 ego_wrapped = wrap_point(rt.state.truck_rear_pos, world_);
    // Plan in the unwrapped control frame toward the nearest goal image.
    const Vec2 target = rt.state.truck_rear_pos + rel_vector(ego_wrapped, goal.position, world_);
    const Pose start{rt.state.truck_rear_pos, rt.state.truck_heading};
    rt.path = plan_dubins(start, {target, goal.heading}, rt.turn_radius);
    rt.samples = sample_path(*rt.path, params_.path_sample_step);
    auto& planned = rt.planned_length[rt.goal_index];
    if (planned == 0.0) planned = rt.path->length();  // initial plan of this leg
}

Action SimEngine::decide(int ego_index) {
    auto& rt = havs_[ego_index];
    rt.last = DecisionTrace{};

    if (rt.done || rt.arrived) {
        rt.last.waiting = true;
        return rt.last.action;
    }

    if (!rt.path) {
        plan_to_goal(ego_index);
        rt.last.replanned = true;
    } else {
        const auto errors = tracking_errors(rt.state, rt.samples, params_.controller, rt.config);
        if (needs_replan(errors, params_.controller)) {
            plan_to_goal(ego_index);
            rt.last.replanned = true;
        }
    }

    const auto errors = tracking_errors(rt.state, rt.samples, params_.controller, rt.config);
    const double steer_center = steering_command(errors, rt.config, params_.controller);

    const auto neighbors = sense_neighbors(ego_index);
    const auto& bp = params_.behaviors;

    const auto goal_map = goal_attraction(steer_center, grid_, bp, rt.config);
    const auto straight_map = straightening_attraction(rt.state, rt.config, grid_);
    const auto evade_map =
        evade_attraction(rt.state, rt.config, neighbors, grid_, params_.dt, bp, world_);
    const auto progress_map = progress_attraction(rt.standstill, grid_, bp);
    const auto jack_map = jackknife_prevention(rt.state, rt.config, grid_, params_.dt);
    const auto coll_map =
        collision_prevention(rt.state, rt.config, neighbors, grid_, params_.dt, bp, world_);

    MergeDiagnostics diag;
    const Action action = merge_and_select(
        {&goal_map, &straight_map, &evade_map, &progress_map},
        {bp.goal_weight, bp.straighten_weight, bp.evade_weight, bp.progress_weight},
        {&jack_map, &coll_map}, grid_, params_.merge, &diag);

    rt.last.action = action;
    rt.last.blocked_fraction = diag.blocked_fraction;
    rt.last.all_forward_blocked = diag.all_forward_blocked;
    return action;
}

void SimEngine::step_world() {
    const std::size_t n = havs_.size();

    // Phase 1: all decisions against the same snapshot. Decisions only read
    // other HAVs' states and mutate ego-local bookkeeping.
    for (std::size_t i = 0; i < n; ++i) decide(static_cast<int>(i));

    // Phase 2: simultaneous commit.
    for (auto& rt : havs_) {
        if (rt.last.waiting) {
            rt.waiting_steps += 1;
            continue;
        }
        const Action a = rt.last.action;
        if (a.speed > 0.0) {
            rt.state = step(rt.state, rt.config, a, params_.dt);
            rt.traveled += a.speed * params_.dt;
            rt.standstill = 0;
        } else {
            rt.standstill += 1;
        }
    }

    // Phase 3: goal arrival and the simultaneous second-goal assignment.
    for (std::size_t i = 0; i < n; ++i) {
        auto& rt = havs_[i];
        if (rt.done || rt.arrived) continue;
        if (at_goal(static_cast<int>(i))) {
            rt.arrived = true;
            if (rt.goal_index == 1) rt.done = true;
        }
    }
    bool all_at_first = true;
    for (const auto& rt : havs_)
        if (rt.goal_index != 0 || !rt.arrived) {
            all_at_first = false;
            break;
        }
    if (all_at_first) {
        for (auto& rt : havs_) {
            rt.goal_index = 1;
            rt.arrived = false;
            rt.path.reset();
            rt.samples.clear();
            rt.standstill = 0;
        }
    }

    ++step_count_;
    if (trajectory_sink_) log_trajectory_rows();
    assert_safety();
}

void SimEngine::assert_safety() const {
    for (std::size_t i = 0; i < havs_.size(); ++i) {
        if (is_jackknifed(havs_[i].state)) {
            std::ostringstream msg;
            msg << "safety violation at step " << step_count_ << ": HAV " << i
                << " jackknifed; articulations:";
            for (int j = 1; j <= havs_[i].state.trailer_count(); ++j)
                msg << ' ' << articulation(havs_[i].state, j);
            throw SafetyViolation(msg.str());
        }
    }
    for (std::size_t i = 0; i < havs_.size(); ++i) {
        const Vec2 pi = wrap_point(havs_[i].state.truck_rear_pos, world_);
        for (std::size_t h = i + 1; h < havs_.size(); ++h) {
            const Vec2 ph = wrap_point(havs_[h].state.truck_rear_pos, world_);
            if (potential_collision(pi, havs_[i].footprint, ph, havs_[h].footprint, world_)) {
                std::ostringstream msg;
                msg << "safety violation at step " << step_count_ << ": HAVs " << i << " and " << h
                    << " overlap; distance " << torus_distance(pi, ph, world_)
                    << " <= combined radius " << havs_[i].footprint + havs_[h].footprint;
                throw SafetyViolation(msg.str());
            }
        }
    }
}

std::optional<Outcome> SimEngine::classify(long max_steps) const {
    bool all_done = true;
    for (const auto& rt : havs_)
        if (!rt.done) {
            all_done = false;
            break;
        }
    if (all_done) return Outcome{RunOutcome::Success, step_count_};

    if (step_count_ > 0) {
        bool stationary = true;
        bool all_settled = true;
        for (const auto& rt : havs_) {
            if (rt.last.action.speed > 0.0) stationary = false;
            if (!(rt.done || rt.arrived || rt.last.all_forward_blocked)) all_settled = false;
        }
        if (stationary && all_settled) return Outcome{RunOutcome::Deadlock, step_count_};
    }

    if (step_count_ > max_steps) return Outcome{RunOutcome::Livelock, step_count_};
    return std::nullopt;
}

RunResult SimEngine::run(long max_steps) {
    std::optional<Outcome> outcome;
    while (true) {
        outcome = classify(max_steps);
        if (outcome) break;
        if (step_count_ >= max_steps) {
            outcome = Outcome{RunOutcome::Livelock, step_count_};
            break;
        }
        step_world();
    }

    RunResult result;
    result.outcome = *outcome;
    result.steps = step_count_;
    result.scenario_seed = scenario_seed_;
    result.hav_stats.reserve(havs_.size());
    for (const auto& rt : havs_) {
        HavRunStats s;
        s.trailer_count = rt.config.trailer_count();
        s.traveled = rt.traveled;
        s.eligible_time = (static_cast<double>(step_count_) - static_cast<double>(rt.waiting_steps)) *
                          params_.dt;
        s.planned_length = rt.planned_length[0] + rt.planned_length[1];
        s.reached_both = rt.done;
        result.hav_stats.push_back(s);
    }
    return result;
}

const char* SimEngine::trajectory_header() {
    return "step,hav,x,y,heading,articulations,speed,steer,blocked_fraction";
}

void SimEngine::log_trajectory_rows() {
    auto& out = *trajectory_sink_;
    for (std::size_t i = 0; i < havs_.size(); ++i) {
        const auto& rt = havs_[i];
        const Vec2 p = wrap_point(rt.state.truck_rear_pos, world_);
        out << step_count_ << ',' << i << ',' << p.x << ',' << p.y << ',' << rt.state.truck_heading
            << ',';
        for (int j = 1; j <= rt.state.trailer_count(); ++j) {
            if (j > 1) out << ';';
            out << articulation(rt.state, j);
        }
        out << ',' << rt.last.action.speed << ',' << rt.last.action.steer << ','
            << rt.last.blocked_fraction << '\n';
    }
}

}  // namespace havsim
