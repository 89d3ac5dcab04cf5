#include "havsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "havsim/angles.hpp"

namespace havsim {

namespace {

constexpr int kRejectionCap = 10000;

// Substream tags for the per-purpose RNG split.
constexpr std::uint64_t kTagHavBase = 0xA1000000ULL;
constexpr std::uint64_t kTagStarts = 0xB0ULL;
constexpr std::uint64_t kTagGoalsFirst = 0xC1ULL;
constexpr std::uint64_t kTagGoalsSecond = 0xC2ULL;

bool poses_clear(const std::vector<Pose>& poses, const std::vector<double>& radii,
                 const TorusWorld& world) {
    for (std::size_t i = 0; i < poses.size(); ++i)
        for (std::size_t h = i + 1; h < poses.size(); ++h)
            if (potential_collision(poses[i].position, radii[i], poses[h].position, radii[h],
                                    world))
                return false;
    return true;
}

std::vector<Pose> sample_pose_set(Rng rng, const std::vector<double>& radii,
                                  const TorusWorld& world, const char* what) {
    std::vector<Pose> poses(radii.size());
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        for (auto& p : poses) {
            p.position = {rng.uniform(0.0, world.edge), rng.uniform(0.0, world.edge)};
            p.heading = rng.uniform_angle();
        }
        if (poses_clear(poses, radii, world)) return poses;
    }
    throw std::runtime_error(std::string("sample_scenario: rejection cap exceeded for ") + what);
}

}  // namespace

HavConfig sample_hav(Rng& rng) {
    HavConfig cfg;
    cfg.max_steer = deg_to_rad(50.0);
    cfg.min_speed = 0.0;
    cfg.max_speed = 4.0;

    int trailers = 0;
    int attempts = 0;
    do {
        if (++attempts > kRejectionCap)
            throw std::runtime_error("sample_hav: trailer-count rejection cap exceeded");
        trailers = static_cast<int>(std::lround(rng.rayleigh(3.0)));
    } while (trailers < 1 || trailers > 10);

    double truck = 0.0;
    attempts = 0;
    do {
        if (++attempts > kRejectionCap)
            throw std::runtime_error("sample_hav: truck-length rejection cap exceeded");
        truck = rng.uniform01() < 0.5 ? rng.normal(4.0, 0.6) : rng.normal(10.7, 1.2);
    } while (truck < 2.0 || truck >= 12.0);
    cfg.truck_wheelbase = truck;

    cfg.trailer_wheelbases.resize(static_cast<std::size_t>(trailers));
    for (auto& l : cfg.trailer_wheelbases) l = rng.uniform(2.0, 12.0);

    cfg.validate();
    return cfg;
}

double torus_edge(const std::vector<HavConfig>& havs, double density) {
    if (!(density > 0.0) || density > 1.0)
        throw std::invalid_argument("torus_edge: density must be in (0, 1]");
    double area = 0.0;
    for (const auto& cfg : havs) {
        const double d = footprint_radius(cfg);
        area += kPi * d * d;
    }
    return std::sqrt(area / density);
}

Scenario sample_scenario(std::uint64_t seed, int swarm_size, double density) {
    if (swarm_size < 1) throw std::invalid_argument("sample_scenario: swarm size must be >= 1");

    Scenario sc;
    sc.seed = seed;
    sc.density = density;

    const Rng root(seed);
    sc.havs.reserve(static_cast<std::size_t>(swarm_size));
    for (int i = 0; i < swarm_size; ++i) {
        Rng hav_rng = root.derive(kTagHavBase + static_cast<std::uint64_t>(i));
        sc.havs.push_back(sample_hav(hav_rng));
    }

    sc.world.edge = torus_edge(sc.havs, density);

    std::vector<double> radii;
    radii.reserve(sc.havs.size());
    for (const auto& cfg : sc.havs) radii.push_back(footprint_radius(cfg));

    sc.starts = sample_pose_set(root.derive(kTagStarts), radii, sc.world, "start poses");
    auto first = sample_pose_set(root.derive(kTagGoalsFirst), radii, sc.world, "first goals");
    auto second = sample_pose_set(root.derive(kTagGoalsSecond), radii, sc.world, "second goals");

    sc.goal_sequences.resize(sc.havs.size());
    for (std::size_t i = 0; i < sc.havs.size(); ++i)
        sc.goal_sequences[i] = {first[i], second[i]};
    return sc;
}

std::string to_text(const Scenario& sc) {
    nlohmann::ordered_json j;
    j["seed"] = sc.seed;
    j["density"] = sc.density;
    j["torus_edge"] = sc.world.edge;
    auto& havs = j["havs"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < sc.havs.size(); ++i) {
        const auto& cfg = sc.havs[i];
        nlohmann::ordered_json h;
        h["truck_wheelbase"] = cfg.truck_wheelbase;
        h["trailer_wheelbases"] = cfg.trailer_wheelbases;
        h["max_steer"] = cfg.max_steer;
        h["min_speed"] = cfg.min_speed;
        h["max_speed"] = cfg.max_speed;
        h["start"] = {{"x", sc.starts[i].position.x},
                      {"y", sc.starts[i].position.y},
                      {"heading", sc.starts[i].heading}};
        auto& goals = h["goals"] = nlohmann::ordered_json::array();
        for (const auto& g : sc.goal_sequences[i])
            goals.push_back(
                {{"x", g.position.x}, {"y", g.position.y}, {"heading", g.heading}});
        havs.push_back(std::move(h));
    }
    return j.dump(2) + "\n";
}

Scenario scenario_from_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Scenario sc;
    sc.seed = j.at("seed").get<std::uint64_t>();
    sc.density = j.at("density").get<double>();
    sc.world.edge = j.at("torus_edge").get<double>();
    for (const auto& h : j.at("havs")) {
        HavConfig cfg;
        cfg.truck_wheelbase = h.at("truck_wheelbase").get<double>();
        cfg.trailer_wheelbases = h.at("trailer_wheelbases").get<std::vector<double>>();
        cfg.max_steer = h.at("max_steer").get<double>();
        cfg.min_speed = h.at("min_speed").get<double>();
        cfg.max_speed = h.at("max_speed").get<double>();
        cfg.validate();
        sc.havs.push_back(std::move(cfg));
        const auto& s = h.at("start");
        sc.starts.push_back(
            {{s.at("x").get<double>(), s.at("y").get<double>()}, s.at("heading").get<double>()});
        std::vector<Pose> goals;
        for (const auto& g : h.at("goals"))
            goals.push_back({{g.at("x").get<double>(), g.at("y").get<double>()},
                             g.at("heading").get<double>()});
        sc.goal_sequences.push_back(std::move(goals));
    }
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_scenario: cannot open " + path);
    out << to_text(sc);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_scenario: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_text(ss.str());
}

}  // namespace havsim
