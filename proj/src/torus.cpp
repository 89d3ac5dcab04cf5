#include "havsim/torus.hpp"

#include <cmath>

namespace havsim {

namespace {

double wrap_coord(double x, double edge) {
    double r = x - edge * std::floor(x / edge);
    if (r >= edge) r = 0.0;  // guard against floor rounding at the seam
    return r;
}

double min_image(double dx, double edge) {
    // std::remainder lands in [-edge/2, +edge/2]; fold the positive boundary
    // onto the negative representative to keep the interval half-open.
    double r = std::remainder(dx, edge);
    if (r >= 0.5 * edge) r -= edge;
    return r;
}

}  // namespace

Vec2 wrap_point(Vec2 p, const TorusWorld& world) {
    return {wrap_coord(p.x, world.edge), wrap_coord(p.y, world.edge)};
}

Vec2 rel_vector(Vec2 from, Vec2 to, const TorusWorld& world) {
    return {min_image(to.x - from.x, world.edge), min_image(to.y - from.y, world.edge)};
}

double torus_distance(Vec2 a, Vec2 b, const TorusWorld& world) {
    return norm(rel_vector(a, b, world));
}

bool potential_collision(Vec2 center_i, double d_i, Vec2 center_h, double d_h,
                         const TorusWorld& world) {
    return torus_distance(center_i, center_h, world) <= d_i + d_h;
}

}  // namespace havsim
