#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "havsim/torus.hpp"

namespace havsim {

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };

const char* to_string(DubinsWord word);

/// Shortest curvature-bounded path between two poses: three segments, each a
/// circular arc of radius `radius` or a straight line.
struct DubinsPath {
    DubinsWord word{DubinsWord::LSL};
    std::array<double, 3> segment_lengths{};  // meters, in path order
    double radius{0.0};
    Pose start;
    Pose goal;

    double length() const {
        return segment_lengths[0] + segment_lengths[1] + segment_lengths[2];
    }
};

struct PathSample {
    Vec2 position;
    double heading{0.0};
    double arc_length{0.0};
};

/// Minimum-length path over all six Dubins words at turning radius `radius`.
/// Purely geometric and obstacle-unaware. Near-coincident poses yield a
/// zero-length path.
DubinsPath plan_dubins(const Pose& start, const Pose& goal, double radius);

/// Pose at arc length s along the path (s clamped to [0, length]).
Pose pose_at(const DubinsPath& path, double s);

/// Samples at even arc-length intervals <= step, both endpoints included;
/// headings are path tangents.
std::vector<PathSample> sample_path(const DubinsPath& path, double step);

struct NearestLookahead {
    std::size_t nearest_index{0};
    std::size_t lookahead_index{0};
};

/// Nearest sample by Euclidean distance (earliest index on ties) and the
/// sample at arc length nearest.s + lookahead_distance (clamped to the end).
NearestLookahead nearest_and_lookahead(const std::vector<PathSample>& samples, Vec2 position,
                                       double lookahead_distance);

}  // namespace havsim
