#include "freqsim/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freqsim/analysis.hpp"
#include "freqsim/rng.hpp"

namespace freqsim {

Workload generate_random_workload(const GenOptions& options) {
    if (options.tasks < 1)
        throw std::invalid_argument("gen: need at least one task");
    if (!(options.target_utilization > 0.0) || options.target_utilization > 1.0)
        throw std::invalid_argument("gen: target utilization must be in (0, 1]");
    if (options.period_min < 2 || options.period_max < options.period_min)
        throw std::invalid_argument("gen: bad period range");

    SplitMix64 rng(options.seed);
    const int n = options.tasks;

    // UUniFast: split the target across n tasks, uniform over the simplex.
    std::vector<double> shares(static_cast<std::size_t>(n));
    double remaining = options.target_utilization;
    for (int i = 0; i < n - 1; ++i) {
        double u = rng.unit_open_closed();
        double next = remaining * std::pow(u, 1.0 / static_cast<double>(n - i - 1));
        shares[static_cast<std::size_t>(i)] = remaining - next;
        remaining = next;
    }
    shares[static_cast<std::size_t>(n - 1)] = remaining;

    const double log_min = std::log(static_cast<double>(options.period_min));
    const double log_max = std::log(static_cast<double>(options.period_max));

    Workload w;
    w.seed = options.seed;
    for (int i = 0; i < n; ++i) {
        double u = rng.unit_open_closed();
        Tick period = static_cast<Tick>(
            std::llround(std::exp(log_min + (log_max - log_min) * u)));
        period = std::clamp(period, options.period_min, options.period_max);
        Tick compute = std::max<Tick>(
            1, std::llround(shares[static_cast<std::size_t>(i)] *
                            static_cast<double>(period)));
        compute = std::min(compute, period);

        TaskSpec task;
        task.id = i;
        task.arrivals = PeriodicArrivals{period, 0, 0};
        task.relative_deadline = period;
        task.body = {{SegmentKind::Compute, compute}};
        w.tasks.push_back(std::move(task));
    }

    // Rate-monotonic priorities: shorter period, higher priority (lower
    // number); period ties broken by id so priorities stay unique.
    std::vector<std::size_t> order(w.tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        Tick pa = std::get<PeriodicArrivals>(w.tasks[a].arrivals).period;
        Tick pb = std::get<PeriodicArrivals>(w.tasks[b].arrivals).period;
        return pa != pb ? pa < pb : w.tasks[a].id < w.tasks[b].id;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        w.tasks[order[rank]].priority = static_cast<int>(rank);

    if (options.horizon > 0) {
        w.horizon = options.horizon;
    } else {
        std::optional<Tick> hp = hyperperiod(w);
        const Tick fallback = 10 * options.period_max;
        w.horizon = hp && *hp <= (1LL << 40) ? 2 * *hp : fallback;
    }
    return w;
}

}  // namespace freqsim
