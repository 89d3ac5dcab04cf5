#include "havsim/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "havsim/angles.hpp"

namespace havsim {

namespace {

constexpr double kCoincidentTol = 1e-9;

// Normalized segment parameters: arcs in radians, straight segments in units
// of the turning radius; every entry scales to meters by the same factor R.
struct WordParams {
    double t, p, q;
    double total() const { return t + p + q; }
};

// Standard trigonometric solutions for the six words, in the frame where
// the start-goal baseline is the x-axis: d = |goal - start| / R, alpha and
// beta are the start/goal headings relative to that baseline.
std::optional<WordParams> solve_lsl(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb);
    if (p_sq < 0.0) return std::nullopt;
    const double theta = std::atan2(cb - ca, d + sa - sb);
    return WordParams{mod_two_pi(-alpha + theta), std::sqrt(p_sq), mod_two_pi(beta - theta)};
}

std::optional<WordParams> solve_rsr(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double p_sq = 2.0 + d * d - 2.0 * std::cos(alpha - beta) + 2.0 * d * (sb - sa);
    if (p_sq < 0.0) return std::nullopt;
    const double theta = std::atan2(ca - cb, d - sa + sb);
    return WordParams{mod_two_pi(alpha - theta), std::sqrt(p_sq), mod_two_pi(-beta + theta)};
}

std::optional<WordParams> solve_lsr(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double p_sq = -2.0 + d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa + sb);
    if (p_sq < 0.0) return std::nullopt;
    const double p = std::sqrt(p_sq);
    const double theta = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
    return WordParams{mod_two_pi(-alpha + theta), p, mod_two_pi(-beta + theta)};
}

std::optional<WordParams> solve_rsl(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double p_sq = -2.0 + d * d + 2.0 * std::cos(alpha - beta) - 2.0 * d * (sa + sb);
    if (p_sq < 0.0) return std::nullopt;
    const double p = std::sqrt(p_sq);
    const double theta = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
    return WordParams{mod_two_pi(alpha - theta), p, mod_two_pi(beta - theta)};
}

std::optional<WordParams> solve_rlr(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double tmp = 0.125 * (6.0 - d * d + 2.0 * std::cos(alpha - beta) + 2.0 * d * (sa - sb));
    if (std::fabs(tmp) > 1.0) return std::nullopt;
    const double p = kTwoPi - std::acos(tmp);
    const double theta = std::atan2(ca - cb, d - sa + sb);
    const double t = mod_two_pi(alpha - theta + 0.5 * p);
    return WordParams{t, p, mod_two_pi(alpha - beta - t + p)};
}

std::optional<WordParams> solve_lrl(double d, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double tmp = 0.125 * (6.0 - d * d + 2.0 * std::cos(alpha - beta) - 2.0 * d * (sa - sb));
    if (std::fabs(tmp) > 1.0) return std::nullopt;
    const double p = kTwoPi - std::acos(tmp);
    const double theta = std::atan2(-ca + cb, d + sa - sb);
    const double t = mod_two_pi(-alpha + theta + 0.5 * p);
    return WordParams{t, p, mod_two_pi(beta - alpha - t + p)};
}

char segment_type(DubinsWord word, int idx) {
    static constexpr const char* kSegments[6] = {"LSL", "RSR", "LSR", "RSL", "RLR", "LRL"};
    return kSegments[static_cast<int>(word)][idx];
}

Pose advance(const Pose& from, char type, double length, double radius) {
    Pose out = from;
    switch (type) {
        case 'S':
            out.position += length * unit_from_angle(from.heading);
            break;
        case 'L': {
            const Vec2 center =
                from.position + radius * Vec2{-std::sin(from.heading), std::cos(from.heading)};
            const double h = from.heading + length / radius;
            out.position = center + radius * Vec2{std::sin(h), -std::cos(h)};
            out.heading = wrap_angle(h);
            break;
        }
        case 'R': {
            const Vec2 center =
                from.position + radius * Vec2{std::sin(from.heading), -std::cos(from.heading)};
            const double h = from.heading - length / radius;
            out.position = center + radius * Vec2{-std::sin(h), std::cos(h)};
            out.heading = wrap_angle(h);
            break;
        }
        default:
            break;
    }
    return out;
}

}  // namespace

const char* to_string(DubinsWord word) {
    static constexpr const char* kNames[6] = {"LSL", "RSR", "LSR", "RSL", "RLR", "LRL"};
    return kNames[static_cast<int>(word)];
}

DubinsPath plan_dubins(const Pose& start, const Pose& goal, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("plan_dubins: radius must be > 0");
    if (!std::isfinite(start.position.x) || !std::isfinite(start.position.y) ||
        !std::isfinite(goal.position.x) || !std::isfinite(goal.position.y) ||
        !std::isfinite(start.heading) || !std::isfinite(goal.heading))
        throw std::invalid_argument("plan_dubins: poses must be finite");

    DubinsPath best;
    best.radius = radius;
    best.start = start;
    best.goal = goal;

    const Vec2 diff = goal.position - start.position;
    const double dist = norm(diff);
    if (dist < kCoincidentTol &&
        std::fabs(wrap_angle(goal.heading - start.heading)) < kCoincidentTol) {
        best.word = DubinsWord::LSL;
        best.segment_lengths = {0.0, 0.0, 0.0};
        return best;
    }

    const double d = dist / radius;
    const double baseline = std::atan2(diff.y, diff.x);
    const double alpha = mod_two_pi(start.heading - baseline);
    const double beta = mod_two_pi(goal.heading - baseline);

    using Solver = std::optional<WordParams> (*)(double, double, double);
    static constexpr Solver kSolvers[6] = {solve_lsl, solve_rsr, solve_lsr,
                                           solve_rsl, solve_rlr, solve_lrl};

    double best_total = std::numeric_limits<double>::infinity();
    for (int w = 0; w < 6; ++w) {
        const auto sol = kSolvers[w](d, alpha, beta);
        if (!sol) continue;
        if (sol->total() < best_total) {
            best_total = sol->total();
            best.word = static_cast<DubinsWord>(w);
            best.segment_lengths = {sol->t * radius, sol->p * radius, sol->q * radius};
        }
    }
    if (!std::isfinite(best_total))
        throw std::runtime_error("plan_dubins: no word admitted a solution");
    return best;
}

Pose pose_at(const DubinsPath& path, double s) {
    s = std::clamp(s, 0.0, path.length());
    Pose pose = path.start;
    for (int i = 0; i < 3; ++i) {
        const double len = path.segment_lengths[i];
        const char type = segment_type(path.word, i);
        if (s <= len) return advance(pose, type, s, path.radius);
        pose = advance(pose, type, len, path.radius);
        s -= len;
    }
    return pose;
}

std::vector<PathSample> sample_path(const DubinsPath& path, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("sample_path: step must be > 0");
    const double total = path.length();
    const std::size_t n =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / step)));
    std::vector<PathSample> samples;
    samples.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = (k == n) ? total : total * static_cast<double>(k) / static_cast<double>(n);
        const Pose pose = pose_at(path, s);
        samples.push_back({pose.position, pose.heading, s});
    }
    return samples;
}

NearestLookahead nearest_and_lookahead(const std::vector<PathSample>& samples, Vec2 position,
                                       double lookahead_distance) {
    if (samples.empty())
        throw std::invalid_argument("nearest_and_lookahead: samples must be nonempty");

    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d2 = norm_sq(samples[i].position - position);
        if (d2 < best) {
            best = d2;
            nearest = i;
        }
    }

    const double target = samples[nearest].arc_length + lookahead_distance - 1e-9;
    std::size_t lookahead = samples.size() - 1;
    for (std::size_t i = nearest; i < samples.size(); ++i) {
        if (samples[i].arc_length >= target) {
            lookahead = i;
            break;
        }
    }
    return {nearest, lookahead};
}

}  // namespace havsim
