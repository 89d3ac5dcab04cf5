#include "havsim/hav_model.hpp"

#include <cmath>
#include <stdexcept>

#include "havsim/angles.hpp"

namespace havsim {

void HavConfig::validate() const {
    const int n = trailer_count();
    if (n < 1 || n > 10) throw std::invalid_argument("HavConfig: trailer count must be in [1, 10]");
    if (truck_wheelbase <= 0.0) throw std::invalid_argument("HavConfig: truck wheelbase must be > 0");
    for (double l : trailer_wheelbases)
        if (l <= 0.0) throw std::invalid_argument("HavConfig: trailer wheelbase must be > 0");
    if (min_speed < 0.0 || min_speed >= max_speed)
        throw std::invalid_argument("HavConfig: need 0 <= min_speed < max_speed");
    if (max_steer <= 0.0 || max_steer > kPi / 2.0)
        throw std::invalid_argument("HavConfig: need 0 < max_steer <= pi/2");
}

HavState HavState::aligned(Vec2 pos, double heading, int n_trailers) {
    HavState s;
    s.truck_rear_pos = pos;
    s.truck_heading = wrap_angle(heading);
    s.trailer_headings.assign(static_cast<std::size_t>(n_trailers), s.truck_heading);
    return s;
}

double articulation(const HavState& state, int j) {
    const double prev = (j == 1) ? state.truck_heading : state.trailer_headings[j - 2];
    return wrap_angle(state.trailer_headings[j - 1] - prev);
}

void step(const HavState& state, const HavConfig& config, const Action& action, double dt,
          HavState& out) {
    if (action.speed < 0.0) throw std::invalid_argument("step: forward driving only (speed >= 0)");
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");

    const double v0 = action.speed;
    const double th0 = state.truck_heading;

    out.truck_rear_pos.x = state.truck_rear_pos.x + v0 * std::cos(th0) * dt;
    out.truck_rear_pos.y = state.truck_rear_pos.y + v0 * std::sin(th0) * dt;
    out.truck_heading =
        wrap_angle(th0 + v0 / config.truck_wheelbase * std::tan(action.steer) * dt);

    const int n = state.trailer_count();
    out.trailer_headings.resize(static_cast<std::size_t>(n));

    // Trailer speeds are instantaneous algebraic quantities; both the speed
    // chain and the heading rates use pre-step angles only.
    double v_prev = v0;
    double th_prev = th0;
    for (int j = 1; j <= n; ++j) {
        const double th_j = state.trailer_headings[j - 1];
        const double delta = th_j - th_prev;
        const double rate = -(v_prev / config.trailer_wheelbases[j - 1]) * std::sin(delta);
        out.trailer_headings[j - 1] = wrap_angle(th_j + rate * dt);
        v_prev = v_prev * std::cos(delta);
        if (v_prev < 0.0)
            throw std::logic_error("step: negative propagated trailer speed (jackknifed input)");
        th_prev = th_j;
    }
}

HavState step(const HavState& state, const HavConfig& config, const Action& action, double dt) {
    HavState out;
    step(state, config, action, dt, out);
    return out;
}

bool is_jackknifed(const HavState& state) {
    double th_prev = state.truck_heading;
    for (double th : state.trailer_headings) {
        if (std::cos(th - th_prev) < 0.0) return true;
        th_prev = th;
    }
    return false;
}

double footprint_radius(const HavConfig& config) {
    double trailer_sum = 0.0;
    for (double l : config.trailer_wheelbases) trailer_sum += l;
    return std::max(config.truck_wheelbase, trailer_sum);
}

double min_turning_radius(const HavConfig& config) {
    double sq = config.truck_wheelbase * config.truck_wheelbase;
    for (double l : config.trailer_wheelbases) sq += l * l;
    return std::sqrt(sq);
}

std::vector<Vec2> polyline(const HavState& state, const HavConfig& config) {
    std::vector<Vec2> chain;
    chain.reserve(static_cast<std::size_t>(state.trailer_count()) + 2);
    chain.push_back(state.truck_rear_pos +
                    config.truck_wheelbase * unit_from_angle(state.truck_heading));
    chain.push_back(state.truck_rear_pos);
    Vec2 p = state.truck_rear_pos;
    for (int j = 1; j <= state.trailer_count(); ++j) {
        p -= config.trailer_wheelbases[j - 1] * unit_from_angle(state.trailer_headings[j - 1]);
        chain.push_back(p);
    }
    return chain;
}

}  // namespace havsim
