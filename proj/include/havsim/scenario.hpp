#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "havsim/hav_model.hpp"
#include "havsim/rng.hpp"
#include "havsim/torus.hpp"

namespace havsim {

/// A fully specified experiment instance: torus, vehicles, start poses and
/// the two-goal sequence per vehicle. A scenario is a pure function of
/// (seed, swarm size, density).
struct Scenario {
    TorusWorld world;
    std::vector<HavConfig> havs;
    std::vector<Pose> starts;
    std::vector<std::vector<Pose>> goal_sequences;  // two poses per HAV
    std::uint64_t seed{0};
    double density{0.0};
};

/// Random vehicle morphology: Rayleigh(sigma=3) trailer count rounded and
/// truncated to [1,10]; truck length from an equal-weight Gaussian mixture
/// (4 +- 0.6, 10.7 +- 1.2) truncated to [2,12); trailer lengths uniform on
/// [2,12); fixed 50 deg steering limit and 0..4 m/s speed range.
HavConfig sample_hav(Rng& rng);

/// Torus edge from the occupied-area constraint edge^2 = sum(pi d_i^2) / rho.
double torus_edge(const std::vector<HavConfig>& havs, double density);

/// Full scenario: vehicles, torus, then rejection-sampled start poses and two
/// goal-pose sets, each set free of pairwise footprint overlap. Throws
/// std::runtime_error when a pose set exceeds the rejection cap.
Scenario sample_scenario(std::uint64_t seed, int swarm_size, double density);

/// Human-readable structured text (JSON) round trip.
std::string to_text(const Scenario& scenario);
Scenario scenario_from_text(const std::string& text);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace havsim
