#pragma once

#include "havsim/vec2.hpp"

namespace havsim {

/// Square periodic world with edge length `edge`.
struct TorusWorld {
    double edge{0.0};
};

/// World-frame pose of a truck rear axle.
struct Pose {
    Vec2 position;
    double heading{0.0};
};

/// Map a point into [0, edge)^2 by modular reduction.
Vec2 wrap_point(Vec2 p, const TorusWorld& world);

/// Shortest displacement from `from` to `to` under periodic boundary.
/// Each component lies in [-edge/2, edge/2); ties at exactly edge/2 resolve
/// to the negative representative.
Vec2 rel_vector(Vec2 from, Vec2 to, const TorusWorld& world);

/// Minimal-image distance between two (wrapped or unwrapped) points.
double torus_distance(Vec2 a, Vec2 b, const TorusWorld& world);

/// Bounding-circle overlap test: true iff the torus distance between the
/// centers is <= the combined collision distance d_i + d_h.
bool potential_collision(Vec2 center_i, double d_i, Vec2 center_h, double d_h,
                         const TorusWorld& world);

}  // namespace havsim
