#pragma once

#include <vector>

#include "havsim/vec2.hpp"

namespace havsim {

/// Immutable morphology of a truck towing 1..10 passive trailers. Wheelbase
/// doubles as segment length; hitching is on-axle.
struct HavConfig {
    double truck_wheelbase{0.0};
    std::vector<double> trailer_wheelbases;
    double max_steer{0.0};
    double min_speed{0.0};
    double max_speed{0.0};

    int trailer_count() const { return static_cast<int>(trailer_wheelbases.size()); }

    /// Throws std::invalid_argument when invariants are broken
    /// (N in [1,10], wheelbases > 0, 0 <= vmin < vmax, 0 < max_steer <= pi/2).
    void validate() const;
};

/// Integrable state: truck rear-axle position, truck heading, trailer
/// headings. All headings are kept normalized to (-pi, pi]. Positions of
/// axles behind the truck's rear axle are derived, never stored.
struct HavState {
    Vec2 truck_rear_pos;
    double truck_heading{0.0};
    std::vector<double> trailer_headings;

    int trailer_count() const { return static_cast<int>(trailer_headings.size()); }

    /// Fully aligned state (all trailer headings equal the truck heading).
    static HavState aligned(Vec2 pos, double heading, int n_trailers);
};

/// One executable control: truck speed and steering angle.
struct Action {
    double speed{0.0};
    double steer{0.0};
};

/// Articulation angle of trailer j (1-based), wrapped to (-pi, pi].
double articulation(const HavState& state, int j);

/// One explicit-Euler step of the truck-trailer kinematics. All trailer
/// rates are evaluated with pre-step angles (simultaneous update); trailer
/// speeds propagate as v_j = v_{j-1} * cos(delta_j).
///
/// Requires action.speed >= 0 and |action.steer| <= config.max_steer; the
/// state must not be jackknifed (negative propagated speed is a logic error).
HavState step(const HavState& state, const HavConfig& config, const Action& action, double dt);

/// In-place variant for hot loops; `out` may not alias `state`.
void step(const HavState& state, const HavConfig& config, const Action& action, double dt,
          HavState& out);

/// True iff any articulation angle has cos(delta) < 0. |delta| == pi/2
/// exactly is still valid.
bool is_jackknifed(const HavState& state);

/// Conservative bounding-circle radius: max(truck wheelbase, sum of trailer
/// wheelbases), centered at the truck rear axle.
double footprint_radius(const HavConfig& config);

/// Smallest constant-curvature turn the vehicle can hold without growing
/// articulation: sqrt(sum of squared wheelbases), truck included.
double min_turning_radius(const HavConfig& config);

/// Axle chain front axle -> truck rear axle -> trailer axles; each point is
/// one wheelbase behind the previous along that segment's heading.
/// Length is trailer_count + 2.
std::vector<Vec2> polyline(const HavState& state, const HavConfig& config);

}  // namespace havsim
