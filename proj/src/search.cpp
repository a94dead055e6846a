#include "freqsim/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace freqsim {

bool is_schedulable(const Trace& trace) {
    return trace.missed_count() == 0;
}

double naive_estimate(const Workload& workload) {
    Trace trace = simulate(workload, Baseline{});
    return std::clamp(measure_utilization(trace), kPhiFloor, 1.0);
}

namespace {

ExecutionMode mode_for(SearchFamily family, double phi, Tick max_cycle) {
    if (family == SearchFamily::TrueScaling) return TrueScaling{phi};
    // phi == 1 has no slowdown equivalent (zero overhead); probe the real
    // nominal system instead.
    if (phi >= 1.0) return Baseline{};
    return Slowdown{SlowdownConfig{params_for_target(phi, max_cycle)}};
}

}  // namespace

SearchResult min_frequency_search(const Workload& workload, SearchFamily family,
                                  const SearchOptions& options) {
    if (!(options.tolerance > 0.0) || !(options.tolerance < 1.0))
        throw std::invalid_argument("search: tolerance must be in (0, 1)");
    if (options.repeats < 1)
        throw std::invalid_argument("search: repeats must be >= 1");

    SearchResult result;
    result.tolerance = options.tolerance;
    result.family = family;
    result.repeats = options.repeats;
    result.monotonicity_assumed = workload.has_wait();

    // All derived seeds must pass; one miss anywhere fails the probe.
    auto probe = [&](double phi) -> Probe {
        std::int64_t misses = 0;
        for (int i = 0; i < options.repeats; ++i) {
            Workload run = workload;
            run.seed = workload.seed + static_cast<std::uint64_t>(i);
            misses += simulate(run, mode_for(family, phi, options.max_cycle))
                          .missed_count();
        }
        Probe p{phi, misses == 0, misses};
        result.probes.push_back(p);
        return p;
    };

    // The whole range is pointless if the nominal system already fails.
    if (!probe(1.0).schedulable) {
        result.warm_start_phi = 1.0;
        return result;
    }

    double lo = kPhiFloor;  // unschedulable or range floor
    double hi = 1.0;        // schedulable

    double start = options.start ? *options.start : naive_estimate(workload);
    start = std::clamp(start, kPhiFloor, 1.0);
    result.warm_start_phi = start;

    if (start > lo && start < hi) {
        if (probe(start).schedulable)
            hi = start;
        else
            lo = start;
    }

    while (hi - lo > options.tolerance) {
        double mid = lo + (hi - lo) / 2.0;
        if (probe(mid).schedulable)
            hi = mid;
        else
            lo = mid;
    }
    result.min_phi = hi;
    return result;
}

}  // namespace freqsim
