#include "freqsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace freqsim {

// ---------------------------------------------------------------------------
// Energy model

double EnergyParams::voltage_of(double phi) const {
    if (voltage_table.empty()) return phi;  // proportional V(phi) = phi
    if (phi <= voltage_table.front().phi) return voltage_table.front().voltage;
    if (phi >= voltage_table.back().phi) return voltage_table.back().voltage;
    for (std::size_t i = 1; i < voltage_table.size(); ++i) {
        const VoltagePoint& a = voltage_table[i - 1];
        const VoltagePoint& b = voltage_table[i];
        if (phi <= b.phi) {
            double t = (phi - a.phi) / (b.phi - a.phi);
            return a.voltage + t * (b.voltage - a.voltage);
        }
    }
    return voltage_table.back().voltage;
}

EnergyMetrics energy_metrics(const Trace& trace, double phi,
                             const EnergyParams& params) {
    if (!(phi > 0.0) || phi > 1.0)
        throw std::invalid_argument("energy_metrics: phi must be in (0, 1]");
    for (std::size_t i = 1; i < params.voltage_table.size(); ++i)
        if (params.voltage_table[i].voltage <
                params.voltage_table[i - 1].voltage ||
            params.voltage_table[i].phi < params.voltage_table[i - 1].phi)
            throw std::invalid_argument(
                "energy_metrics: voltage table must be non-decreasing");

    EnergyMetrics m;
    const double v = params.voltage_of(phi);
    m.power = params.c * params.cap * v * v * phi;
    m.busy_ticks = trace.horizon - trace.idle_ticks();
    m.energy = m.power * static_cast<double>(m.busy_ticks);
    const double v_nom = params.voltage_of(1.0);
    m.energy_ratio_vs_nominal = (v_nom / v) * (v_nom / v);
    return m;
}

// ---------------------------------------------------------------------------
// Rate-monotonic comparator

std::optional<Tick> hyperperiod(const Workload& workload) {
    Tick l = 1;
    for (const TaskSpec& task : workload.tasks) {
        const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals);
        if (!p || p->period < 1) return std::nullopt;
        Tick g = std::gcd(l, p->period);
        if (l / g > std::numeric_limits<Tick>::max() / p->period)
            return std::nullopt;
        l = l / g * p->period;
    }
    return l;
}

RmCheck rm_utilization_check(const Workload& workload, double phi) {
    RmCheck check;
    auto not_applicable = [&](std::string why) {
        check.verdict = RmVerdict::NotApplicable;
        check.reason = std::move(why);
        return check;
    };
    if (!(phi > 0.0) || phi > 1.0)
        return not_applicable("phi outside (0, 1]");
    if (workload.tasks.empty()) return not_applicable("no tasks");

    for (const TaskSpec& task : workload.tasks) {
        const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals);
        if (!p) return not_applicable("non-periodic task present");
        if (p->jitter != 0) return not_applicable("jitter present");
        if (task.has_wait()) return not_applicable("hard waits present");
        if (task.relative_deadline != p->period)
            return not_applicable("deadline != period");
    }
    // Rate-monotonic order: shorter period never at lower priority.
    std::vector<const TaskSpec*> by_priority;
    for (const TaskSpec& t : workload.tasks) by_priority.push_back(&t);
    std::sort(by_priority.begin(), by_priority.end(),
              [](const TaskSpec* a, const TaskSpec* b) {
                  return a->priority < b->priority;
              });
    for (std::size_t i = 1; i < by_priority.size(); ++i) {
        Tick prev = std::get<PeriodicArrivals>(by_priority[i - 1]->arrivals).period;
        Tick cur = std::get<PeriodicArrivals>(by_priority[i]->arrivals).period;
        if (prev > cur)
            return not_applicable("priorities not in rate-monotonic order");
    }

    double u = 0.0, u_ceiled = 0.0;
    for (const TaskSpec& task : workload.tasks) {
        const Tick period = std::get<PeriodicArrivals>(task.arrivals).period;
        const Tick compute = task.total_compute();
        u += static_cast<double>(compute) / (phi * static_cast<double>(period));
        u_ceiled += static_cast<double>(stretched_ticks(compute, phi)) /
                    static_cast<double>(period);
    }
    const double n = static_cast<double>(workload.tasks.size());
    check.utilization = u;
    check.utilization_ceiled = u_ceiled;
    check.bound = n * (std::pow(2.0, 1.0 / n) - 1.0);
    check.verdict =
        u <= check.bound ? RmVerdict::Schedulable : RmVerdict::Inconclusive;
    return check;
}

// ---------------------------------------------------------------------------
// Cross-mode comparison

namespace {

// The grid rows demonstrate what a routine of the requested granularity
// does, so the best-ratio params are scaled up to fill max_cycle; the
// searches keep the finest cycle (params_for_target directly), where the
// approximation error is smallest.
BurstParams coarse_params(double phi, Tick max_cycle) {
    BurstParams p = params_for_target(phi, max_cycle);
    const Tick k = max_cycle / p.cycle();
    return {p.execute * k, p.sleep * k};
}

}  // namespace

ComparisonReport compare_modes(const Workload& workload,
                               const std::vector<double>& grid, Tick max_cycle,
                               double tolerance) {
    std::vector<double> phis = grid;
    std::sort(phis.begin(), phis.end());
    for (double phi : phis)
        if (!(phi > 0.0) || phi > 1.0)
            throw std::invalid_argument("compare: grid values must be in (0, 1]");

    ComparisonReport report;
    for (double phi : phis) {
        GridRow row;
        row.phi = phi;

        Trace true_trace = simulate(workload, TrueScaling{phi});
        row.true_schedulable = is_schedulable(true_trace);
        row.true_misses = true_trace.missed_count();

        row.slowdown_params =
            phi >= 1.0 ? BurstParams{1, 1} : coarse_params(phi, max_cycle);
        if (phi >= 1.0) {
            // no routine at nominal frequency; families trivially agree
            row.slowdown_schedulable = row.true_schedulable;
            row.slowdown_misses = true_trace.missed_count();
        } else {
            SlowdownConfig config{row.slowdown_params};
            Trace slow_trace = simulate(workload, Slowdown{config});
            row.slowdown_schedulable = is_schedulable(slow_trace);
            row.slowdown_misses = slow_trace.missed_count();
            row.distortion =
                distortion_metrics(slow_trace, config,
                                   std::max<Tick>(row.slowdown_params.cycle() * 10,
                                                  workload.horizon / 20 + 1));
        }
        row.diverges = row.true_schedulable != row.slowdown_schedulable;
        if (row.diverges) report.divergences.push_back(phi);
        report.rows.push_back(row);
    }

    SearchOptions options;
    options.tolerance = tolerance;
    options.max_cycle = max_cycle;
    report.search_true =
        min_frequency_search(workload, SearchFamily::TrueScaling, options);
    report.search_slowdown =
        min_frequency_search(workload, SearchFamily::SlowdownApprox, options);
    report.min_phi_naive = naive_estimate(workload);
    return report;
}

}  // namespace freqsim
