#pragma once

#include <cmath>
#include <numbers>

namespace havsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::fmod(a + kPi, kTwoPi);
    if (r <= 0.0) r += kTwoPi;
    return r - kPi;
}

/// Wrap an angle into [0, 2*pi).
inline double mod_two_pi(double a) {
    double r = a - kTwoPi * std::floor(a / kTwoPi);
    if (r >= kTwoPi) r = 0.0;
    return r;
}

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace havsim
