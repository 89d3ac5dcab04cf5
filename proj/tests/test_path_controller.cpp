#include <cmath>

#include "doctest.h"
#include "havsim/angles.hpp"
#include "havsim/path_controller.hpp"
#include "havsim/rng.hpp"

using namespace havsim;

namespace {

HavConfig test_config() {
    HavConfig c;
    c.truck_wheelbase = 4.0;
    c.trailer_wheelbases = {3.0};
    c.max_steer = deg_to_rad(50.0);
    c.min_speed = 0.0;
    c.max_speed = 4.0;
    return c;
}

std::vector<PathSample> straight_samples() {
    auto path = plan_dubins({{0, 0}, 0.0}, {{20, 0}, 0.0}, 2.0);
    return sample_path(path, 0.1);
}

}  // namespace

TEST_CASE("zero errors on the path, aligned") {
    auto cfg = test_config();
    auto samples = straight_samples();
    auto s = HavState::aligned({5.0, 0.0}, 0.0, 1);
    auto e = tracking_errors(s, samples, {}, cfg);
    CHECK(e.heading_error == doctest::Approx(0.0));
    CHECK(e.cross_track_error == doctest::Approx(0.0));
    CHECK(steering_command(e, cfg, {}) == doctest::Approx(0.0));
}

TEST_CASE("lateral offset gives pure cross-track error") {
    auto cfg = test_config();
    auto samples = straight_samples();
    auto s = HavState::aligned({5.0, 1.0}, 0.0, 1);
    auto e = tracking_errors(s, samples, {}, cfg);
    CHECK(e.cross_track_error == doctest::Approx(1.0));
    CHECK(e.heading_error == doctest::Approx(0.0));
    CHECK(e.signed_cross_track == doctest::Approx(-1.0));  // path is to the right
    CHECK(e.pursuit_bearing < 0.0);  // lookahead point pulls back toward the path
}

TEST_CASE("heading offset on the path gives e_H with the path-minus-truck sign") {
    auto cfg = test_config();
    auto samples = straight_samples();
    auto s = HavState::aligned({5.0, 0.0}, 0.3, 1);
    auto e = tracking_errors(s, samples, {}, cfg);
    CHECK(e.heading_error == doctest::Approx(-0.3));
}

TEST_CASE("pure-pursuit and Stanley terms") {
    // Widen the steering limit so the raw controller terms are visible.
    auto cfg = test_config();
    cfg.max_steer = kPi / 2.0;
    ControllerParams p;

    // l_C = 0.2*4 = 0.8, so atan(2*4*0.2/0.8) = atan(2).
    TrackingErrors heading_only{0.2, 0.0, 0.0, 0.2};
    CHECK(steering_command(heading_only, cfg, p) ==
          doctest::Approx(1.1071487177940904).epsilon(1e-9));

    // atan(k_e * e / vmax) = atan(2*1/4) = atan(0.5).
    TrackingErrors cross_only{0.0, 1.0, 1.0, 0.0};
    CHECK(steering_command(cross_only, cfg, p) ==
          doctest::Approx(0.4636476090008061).epsilon(1e-9));
}

TEST_CASE("steering clamps to the limit") {
    auto cfg = test_config();
    TrackingErrors big{1.5, 3.0, 3.0, 1.5};
    CHECK(steering_command(big, cfg, {}) == doctest::Approx(cfg.max_steer));
    TrackingErrors neg{-1.5, 3.0, -3.0, -1.5};
    CHECK(steering_command(neg, cfg, {}) == doctest::Approx(-cfg.max_steer));
}

TEST_CASE("mirror symmetry of the steering law") {
    auto cfg = test_config();
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        double eh = rng.uniform(-0.8, 0.8);
        double ep = rng.uniform(0.0, 2.0);
        TrackingErrors a{eh, ep, ep, eh};
        TrackingErrors b{-eh, ep, -ep, -eh};
        CHECK(steering_command(a, cfg, {}) == doctest::Approx(-steering_command(b, cfg, {})));
    }
}

TEST_CASE("replan trigger uses a strict threshold") {
    ControllerParams p;
    CHECK_FALSE(needs_replan({0.0, 0.5, 0.5, 0.0}, p));
    CHECK_FALSE(needs_replan({0.0, 0.8, 0.8, 0.0}, p));
    CHECK(needs_replan({0.0, 1.2, 1.2, 0.0}, p));
}

TEST_CASE("closed loop converges onto a straight path from an offset") {
    auto cfg = test_config();
    auto path = plan_dubins({{0, 0}, 0.0}, {{120, 0}, 0.0}, min_turning_radius(cfg));
    auto samples = sample_path(path, 0.1);

    for (double y0 : {0.6, -0.6}) {
        auto s = HavState::aligned({0.0, y0}, 0.0, 1);
        double v = 4.0, dt = 0.05;
        for (int i = 0; i < 500; ++i) {
            auto e = tracking_errors(s, samples, {}, cfg);
            s = step(s, cfg, {v, steering_command(e, cfg, {})}, dt);
        }
        // After 100 m the truck should ride the centerline tightly.
        CHECK(std::fabs(s.truck_rear_pos.y) < 0.05);
        CHECK(std::fabs(s.truck_heading) < 0.05);
        CHECK_FALSE(is_jackknifed(s));
    }
}
