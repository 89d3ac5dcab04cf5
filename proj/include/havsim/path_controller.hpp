#pragma once

#include <vector>

#include "havsim/dubins.hpp"
#include "havsim/hav_model.hpp"

namespace havsim {

struct ControllerParams {
    double lookahead_factor{0.2};   // l_C = lookahead_factor * truck wheelbase
    double cross_track_gain{2.0};
    double replan_threshold{0.8};   // meters of cross-track error before replanning
};

struct TrackingErrors {
    double heading_error{0.0};       // lookahead tangent minus truck heading, wrapped
    double cross_track_error{0.0};   // unsigned distance to the nearest sample
    double signed_cross_track{0.0};  // sign of cross(tangent, nearest - vehicle)
    double pursuit_bearing{0.0};     // bearing of the lookahead point, wrapped
};

/// Tracking errors against the sampled path. heading_error is the tangent
/// difference at the lookahead sample; pursuit_bearing is the bearing of that
/// sample from the truck (equal on straight paths, half the tangent
/// difference on arcs, which keeps the feedforward from overdriving the
/// curvature). The signed cross-track is positive when steering left brings
/// the truck back onto the path.
TrackingErrors tracking_errors(const HavState& state, const std::vector<PathSample>& samples,
                               const ControllerParams& params, const HavConfig& config);

/// Pure-pursuit feedforward plus Stanley cross-track correction, clamped to
/// the steering limit.
double steering_command(const TrackingErrors& errors, const HavConfig& config,
                        const ControllerParams& params);

/// True iff the cross-track error strictly exceeds the replan threshold.
bool needs_replan(const TrackingErrors& errors, const ControllerParams& params);

}  // namespace havsim
