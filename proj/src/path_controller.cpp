#include "havsim/path_controller.hpp"

#include <algorithm>
#include <cmath>

#include "havsim/angles.hpp"

namespace havsim {

TrackingErrors tracking_errors(const HavState& state, const std::vector<PathSample>& samples,
                               const ControllerParams& params, const HavConfig& config) {
    const double lookahead = params.lookahead_factor * config.truck_wheelbase;
    const auto nl = nearest_and_lookahead(samples, state.truck_rear_pos, lookahead);
    const PathSample& nearest = samples[nl.nearest_index];
    const PathSample& ahead = samples[nl.lookahead_index];

    TrackingErrors e;
    e.heading_error = wrap_angle(ahead.heading - state.truck_heading);
    // When the lookahead point collapses onto the truck (path end), the
    // bearing is undefined; use the tangent difference as its limit.
    const Vec2 to_ahead = ahead.position - state.truck_rear_pos;
    if (norm_sq(to_ahead) > 1e-12) {
        e.pursuit_bearing = wrap_angle(std::atan2(to_ahead.y, to_ahead.x) - state.truck_heading);
    } else {
        e.pursuit_bearing = e.heading_error;
    }
    const Vec2 offset = nearest.position - state.truck_rear_pos;
    e.cross_track_error = norm(offset);
    const double side = cross(unit_from_angle(nearest.heading), offset);
    e.signed_cross_track = (side < 0.0) ? -e.cross_track_error : e.cross_track_error;
    return e;
}

double steering_command(const TrackingErrors& errors, const HavConfig& config,
                        const ControllerParams& params) {
    const double l_c = params.lookahead_factor * config.truck_wheelbase;
    const double pursuit = std::atan(2.0 * config.truck_wheelbase * errors.pursuit_bearing / l_c);
    const double stanley =
        std::atan(params.cross_track_gain * errors.signed_cross_track / config.max_speed);
    return std::clamp(pursuit + stanley, -config.max_steer, config.max_steer);
}

bool needs_replan(const TrackingErrors& errors, const ControllerParams& params) {
    return errors.cross_track_error > params.replan_threshold;
}

}  // namespace havsim
