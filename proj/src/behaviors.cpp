#include "havsim/behaviors.hpp"

#include <algorithm>
#include <cmath>

#include "havsim/angles.hpp"

namespace havsim {

namespace {

// Minimal-image residual for one coordinate, cheap form used inside rollouts.
inline double min_image(double dx, double edge) {
    return dx - edge * std::nearbyint(dx / edge);
}

inline double torus_gap_sq(Vec2 diff, double edge) {
    const double dx = min_image(diff.x, edge);
    const double dy = min_image(diff.y, edge);
    return dx * dx + dy * dy;
}

// Constant-action rollout of the truck rear axle (bicycle model, explicit
// Euler). The first emitted sample uses exactly the same arithmetic as
// havsim::step so the one-step prediction matches the simulator bit for bit.
class TruckRollout {
public:
    TruckRollout(const HavState& state, const HavConfig& config, Action action, double dt)
        : pos_{0.0, 0.0},
          heading_(state.truck_heading),
          step_len_(action.speed * dt),
          dheading_(action.speed / config.truck_wheelbase * std::tan(action.steer) * dt),
          v_(action.speed),
          dt_(dt),
          first_(true) {}

    // Advance one dt and return the offset from the start position.
    Vec2 next() {
        if (first_) {
            dir_ = {v_ * std::cos(heading_) * dt_, v_ * std::sin(heading_) * dt_};
            first_ = false;
        } else {
            const double c = std::cos(dheading_), s = std::sin(dheading_);
            dir_ = {dir_.x * c - dir_.y * s, dir_.x * s + dir_.y * c};
        }
        pos_ += dir_;
        heading_ += dheading_;
        return pos_;
    }

    double step_length() const { return step_len_; }

private:
    Vec2 pos_;
    Vec2 dir_;
    double heading_;
    double step_len_;
    double dheading_;
    double v_;
    double dt_;
    bool first_;
};

}  // namespace

ContextMap goal_attraction(double steer_center, const ActionGrid& grid,
                           const BehaviorParams& params, const HavConfig& config) {
    ContextMap map(MapKind::Interest, grid);
    for (int iv = 0; iv < grid.n_v(); ++iv) {
        const double dv = (grid.speeds()[iv] - config.max_speed) / params.sigma_v;
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            const double dphi = (grid.steers()[ip] - steer_center) / params.sigma_phi;
            map.at(iv, ip) = std::exp(-0.5 * (dphi * dphi + dv * dv));
        }
    }
    return map;
}

ContextMap jackknife_prevention(const HavState& state, const HavConfig& config,
                                const ActionGrid& grid, double dt) {
    ContextMap map(MapKind::Danger, grid);
    HavState scratch;
    for (int iv = 0; iv < grid.n_v(); ++iv) {
        const double v = grid.speeds()[iv];
        if (v <= 0.0) continue;  // state unchanged, never dangerous
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            step(state, config, {v, grid.steers()[ip]}, dt, scratch);
            if (is_jackknifed(scratch)) map.at(iv, ip) = 1.0;
        }
    }
    return map;
}

ContextMap straightening_attraction(const HavState& state, const HavConfig& config,
                                    const ActionGrid& grid) {
    // Per-joint pull toward straight using the articulation curve
    // f(d) = 1 + tanh(0.5 - 2 cos d), measured relative to the articulation
    // the joint holds on the vehicle's own minimum-radius arc. Below that
    // design articulation the joint feels no pull: the raw curve is positive
    // even for an aligned train and would outweigh the goal Gaussian's
    // preference for any turn command, freezing long trains on straight
    // lines and fighting every minimum-radius arc the planner emits.
    auto curve = [](double delta) { return 1.0 + std::tanh(0.5 - 2.0 * std::cos(delta)); };

    double interest = 0.0;
    double preceding_radius = min_turning_radius(config);
    for (int j = 1; j <= state.trailer_count(); ++j) {
        const double l = config.trailer_wheelbases[j - 1];
        // Steady articulation of joint j when the axle ahead of it rides a
        // circle of preceding_radius: sin(delta) = l / R_prev.
        const double arc_delta = std::asin(std::min(1.0, l / preceding_radius));
        const double d = std::fabs(articulation(state, j));
        interest += std::pow(static_cast<double>(j), -0.2) *
                    std::max(0.0, curve(d) - curve(arc_delta));
        preceding_radius = std::sqrt(std::max(preceding_radius * preceding_radius - l * l,
                                              config.truck_wheelbase * config.truck_wheelbase));
    }
    interest = std::clamp(interest, 0.0, 1.0);

    ContextMap map(MapKind::Interest, grid);
    const int col = grid.zero_steer_column();
    for (int iv = 0; iv < grid.n_v(); ++iv) map.at(iv, col) = interest;
    return map;
}

ContextMap collision_prevention(const HavState& state, const HavConfig& config,
                                std::span<const NeighborObservation> neighbors,
                                const ActionGrid& grid, double dt, const BehaviorParams& params,
                                const TorusWorld& world) {
    ContextMap map(MapKind::Danger, grid);
    if (neighbors.empty()) return map;

    const double ego_radius = footprint_radius(config);

    // Neighbors that can't be reached within the horizon contribute nothing.
    std::vector<const NeighborObservation*> reachable;
    reachable.reserve(neighbors.size());
    for (const auto& n : neighbors) {
        const double combined = ego_radius + n.footprint_radius;
        if (norm(n.relative_position) <= combined + params.collision_lookahead + 1e-9)
            reachable.push_back(&n);
    }
    if (reachable.empty()) return map;

    std::vector<char> hit(reachable.size());
    for (int iv = 0; iv < grid.n_v(); ++iv) {
        const double v = grid.speeds()[iv];
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            std::size_t hits = 0;
            if (v <= 0.0) {
                for (const auto* n : reachable) {
                    const double combined = ego_radius + n->footprint_radius;
                    if (torus_gap_sq(n->relative_position, world.edge) < combined * combined)
                        ++hits;
                }
            } else {
                std::fill(hit.begin(), hit.end(), 0);
                const int n_steps =
                    static_cast<int>(std::ceil(params.collision_lookahead / (v * dt)));
                TruckRollout rollout(state, config, {v, grid.steers()[ip]}, dt);
                for (int k = 0; k < n_steps && hits < reachable.size(); ++k) {
                    const Vec2 offset = rollout.next();
                    for (std::size_t m = 0; m < reachable.size(); ++m) {
                        if (hit[m]) continue;
                        const double combined = ego_radius + reachable[m]->footprint_radius;
                        if (torus_gap_sq(reachable[m]->relative_position - offset, world.edge) <
                            combined * combined) {
                            hit[m] = 1;
                            ++hits;
                        }
                    }
                }
            }
            map.at(iv, ip) = static_cast<double>(hits);
        }
    }
    return map;
}

ContextMap evade_attraction(const HavState& state, const HavConfig& config,
                            std::span<const NeighborObservation> neighbors, const ActionGrid& grid,
                            double dt, const BehaviorParams& params, const TorusWorld& world) {
    ContextMap map(MapKind::Interest, grid);
    if (neighbors.empty()) {
        std::fill(map.values.begin(), map.values.end(), 1.0);
        return map;
    }

    const double ego_radius = footprint_radius(config);

    for (int iv = 0; iv < grid.n_v(); ++iv) {
        const double v = grid.speeds()[iv];
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            Vec2 endpoint{0.0, 0.0};
            if (v > 0.0) {
                const int n_steps = static_cast<int>(std::ceil(params.evade_lookahead / (v * dt)));
                TruckRollout rollout(state, config, {v, grid.steers()[ip]}, dt);
                for (int k = 0; k < n_steps; ++k) endpoint = rollout.next();
            }
            double penalty = 0.0;
            for (const auto& n : neighbors) {
                const double combined = ego_radius + n.footprint_radius;
                const double gap =
                    std::sqrt(torus_gap_sq(n.relative_position - endpoint, world.edge)) - combined;
                if (gap < 0.0) {
                    penalty += 1.0;
                } else if (gap < params.evade_bound) {
                    penalty += std::pow(1.0 - gap / params.evade_bound, params.evade_exponent);
                }
            }
            map.at(iv, ip) = std::max(0.0, 1.0 - penalty);
        }
    }
    return map;
}

ContextMap progress_attraction(int n_standstill, const ActionGrid& grid,
                               const BehaviorParams& params) {
    ContextMap map(MapKind::Interest, grid);
    const double interest =
        std::min(1.0, (n_standstill / params.progress_period) * params.progress_increment);
    if (interest <= 0.0) return map;
    for (int iv = 0; iv < grid.n_v(); ++iv) {
        if (grid.speeds()[iv] <= 0.0) continue;
        for (int ip = 0; ip < grid.n_phi(); ++ip) map.at(iv, ip) = interest;
    }
    return map;
}

}  // namespace havsim
