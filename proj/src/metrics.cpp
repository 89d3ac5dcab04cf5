#include "havsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace havsim {

std::optional<double> average_speed(const HavRunStats& stats) {
    if (stats.eligible_time <= 0.0) return std::nullopt;
    return stats.traveled / stats.eligible_time;
}

double path_deviation(const HavRunStats& stats) {
    if (stats.traveled == 0.0) return 0.0;
    if (stats.planned_length <= 0.0) return 0.0;  // degenerate zero-length legs
    return stats.traveled / stats.planned_length;
}

namespace {

struct Welford {
    long n{0};
    double mean{0.0};
    double m2{0.0};

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

ConfidenceInterval to_ci(const Welford& w) {
    ConfidenceInterval ci;
    ci.mean = w.mean;
    ci.n = w.n;
    if (w.n > 1) ci.half_width = 1.959963984540054 * std::sqrt(w.variance() / w.n);
    return ci;
}

}  // namespace

AggregateSummary aggregate(const std::vector<RunResult>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate: empty record set");

    AggregateSummary s;
    s.runs = static_cast<long>(records.size());

    Welford speed_all, dev_all, speed_ok, dev_ok;
    Welford dead_affected, live_affected;

    for (const auto& run : records) {
        switch (run.outcome.classification) {
            case RunOutcome::Success: ++s.successes; break;
            case RunOutcome::Deadlock: ++s.deadlocks; break;
            case RunOutcome::Livelock: ++s.livelocks; break;
        }

        Welford run_speed, run_dev;
        long failed_havs = 0;
        for (const auto& hav : run.hav_stats) {
            if (auto v = average_speed(hav)) run_speed.add(*v);
            run_dev.add(path_deviation(hav));
            if (!hav.reached_both) ++failed_havs;
        }
        if (run_speed.n > 0) {
            speed_all.add(run_speed.mean);
            if (run.outcome.classification == RunOutcome::Success) speed_ok.add(run_speed.mean);
        }
        if (run_dev.n > 0) {
            dev_all.add(run_dev.mean);
            if (run.outcome.classification == RunOutcome::Success) dev_ok.add(run_dev.mean);
        }

        const double affected =
            static_cast<double>(failed_havs) / static_cast<double>(run.hav_stats.size());
        if (run.outcome.classification == RunOutcome::Deadlock) dead_affected.add(affected);
        if (run.outcome.classification == RunOutcome::Livelock) live_affected.add(affected);
    }

    const double n = static_cast<double>(s.runs);
    s.success_rate = s.successes / n;
    s.deadlock_rate = s.deadlocks / n;
    s.livelock_rate = s.livelocks / n;
    s.failure_rate = (s.deadlocks + s.livelocks) / n;

    s.mean_speed = speed_all.mean;
    s.mean_deviation = dev_all.mean;
    s.mean_speed_success_only = speed_ok.mean;
    s.mean_deviation_success_only = dev_ok.mean;

    s.deadlock_affected = to_ci(dead_affected);
    s.livelock_affected = to_ci(live_affected);
    return s;
}

}  // namespace havsim
