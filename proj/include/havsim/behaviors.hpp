#pragma once

#include <span>

#include "havsim/context_map.hpp"
#include "havsim/hav_model.hpp"
#include "havsim/torus.hpp"

namespace havsim {

/// What an HAV knows about a neighbor inside its communication radius:
/// minimal-image relative position of the neighbor's truck rear axle and the
/// neighbor's footprint radius.
struct NeighborObservation {
    Vec2 relative_position;
    double footprint_radius{0.0};
};

struct BehaviorParams {
    double sigma_phi{1.0};            // goal Gaussian spread over steering
    double sigma_v{2.0};              // goal Gaussian spread over speed
    double collision_lookahead{2.0};  // danger trajectory horizon, meters
    double evade_lookahead{8.0};      // interest trajectory horizon, meters
    double evade_bound{10.0};         // gap beyond which no evade penalty applies
    double evade_exponent{4.0};
    double goal_weight{1.0};
    double straighten_weight{1.0};
    double evade_weight{2.0};
    double progress_weight{1.0};
    int progress_period{15};          // standstill steps per interest increment
    double progress_increment{0.15};
};

/// Unit-peak Gaussian over the action grid centered at (steer_center, vmax).
ContextMap goal_attraction(double steer_center, const ActionGrid& grid,
                           const BehaviorParams& params, const HavConfig& config);

/// Danger 1 for every action whose one-step successor is jackknifed.
ContextMap jackknife_prevention(const HavState& state, const HavConfig& config,
                                const ActionGrid& grid, double dt);

/// Articulation-dependent interest on the zero-steering column only; active
/// beyond the articulation each joint holds on the vehicle's minimum-radius
/// design arc.
ContextMap straightening_attraction(const HavState& state, const HavConfig& config,
                                    const ActionGrid& grid);

/// Danger = number of neighbors overlapped anywhere along a constant-action
/// truck rollout of length collision_lookahead (dt-spaced samples; zero-speed
/// actions evaluate the current pose). Neighbors are held static; gaps use
/// torus minimal-image distances.
ContextMap collision_prevention(const HavState& state, const HavConfig& config,
                                std::span<const NeighborObservation> neighbors,
                                const ActionGrid& grid, double dt, const BehaviorParams& params,
                                const TorusWorld& world);

/// Interest 1 minus summed distance penalties at the evade_lookahead rollout
/// endpoint, clipped at zero.
ContextMap evade_attraction(const HavState& state, const HavConfig& config,
                            std::span<const NeighborObservation> neighbors, const ActionGrid& grid,
                            double dt, const BehaviorParams& params, const TorusWorld& world);

/// Staircase interest on all moving actions, growing with consecutive
/// standstill steps.
ContextMap progress_attraction(int n_standstill, const ActionGrid& grid,
                               const BehaviorParams& params);

}  // namespace havsim
