#pragma once

#include <optional>
#include <vector>

#include "havsim/sim_engine.hpp"

namespace havsim {

/// Traveled distance over time not spent waiting at a reached goal.
/// nullopt when no eligible time elapsed.
std::optional<double> average_speed(const HavRunStats& stats);

/// Actual traveled distance over the initially planned minimal path lengths
/// (snapshot at goal assignment). An HAV that never moved scores 0.
double path_deviation(const HavRunStats& stats);

struct ConfidenceInterval {
    double mean{0.0};
    double half_width{0.0};  // 95%, normal approximation
    long n{0};
};

/// Macro-averaged summary over a set of runs: per-run means first, then the
/// mean across runs. Failure rates at run granularity; affected-HAV fractions
/// within deadlocked/livelocked runs at HAV granularity, with 95% CIs.
struct AggregateSummary {
    long runs{0};
    long successes{0};
    long deadlocks{0};
    long livelocks{0};

    double success_rate{0.0};
    double deadlock_rate{0.0};
    double livelock_rate{0.0};
    double failure_rate{0.0};

    // Macro averages over all runs.
    double mean_speed{0.0};
    double mean_deviation{0.0};
    // Same, restricted to successful runs.
    double mean_speed_success_only{0.0};
    double mean_deviation_success_only{0.0};

    ConfidenceInterval deadlock_affected;  // HAV failure share within deadlocked runs
    ConfidenceInterval livelock_affected;  // same within livelocked runs
};

AggregateSummary aggregate(const std::vector<RunResult>& records);

}  // namespace havsim
