#include "freqsim/slowdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "freqsim/simcore.hpp"

namespace freqsim {

double overhead_fraction(const BurstParams& params) {
    return static_cast<double>(params.execute) /
           static_cast<double>(params.cycle());
}

double modeled_frequency(const BurstParams& params, double f_nominal) {
    return static_cast<double>(params.sleep) /
           static_cast<double>(params.cycle()) * f_nominal;
}

BurstParams params_for_target(double target_phi, Tick max_cycle) {
    if (max_cycle < 2)
        throw std::invalid_argument("params_for_target: max_cycle must be >= 2");
    if (!(target_phi > 0.0) || !(target_phi < 1.0))
        throw std::invalid_argument(
            "params_for_target: target must be in (0, 1)");

    BurstParams best{1, 1};
    double best_err = std::abs(modeled_frequency(best, 1.0) - target_phi);
    for (Tick cycle = 2; cycle <= max_cycle; ++cycle) {
        for (Tick e = 1; e < cycle; ++e) {
            BurstParams p{e, cycle - e};
            double err = std::abs(modeled_frequency(p, 1.0) - target_phi);
            // strict improvement only: earlier hits win ties, and the scan
            // order is (cycle asc, execute asc)
            if (err < best_err) {
                best = p;
                best_err = err;
            }
        }
    }
    return best;
}

BurstParams active_params(const SlowdownConfig& config, Tick now,
                          std::optional<TaskId> running_candidate) {
    if (const auto* per_task = std::get_if<PerTaskSchedule>(&config.schedule)) {
        if (running_candidate) {
            auto it = per_task->params.find(*running_candidate);
            if (it != per_task->params.end()) return it->second;
        }
        return config.default_params;
    }
    if (const auto* per_interval =
            std::get_if<PerIntervalSchedule>(&config.schedule)) {
        for (const ScheduleInterval& iv : per_interval->intervals)
            if (iv.start <= now && now < iv.end) return iv.params;
        return config.default_params;
    }
    return config.default_params;
}

namespace {

void check_params(const BurstParams& p, const std::string& where,
                  ValidationReport& report) {
    if (p.execute < 1 || p.sleep < 1) {
        report.errors.push_back(where + ": execute and sleep must be >= 1");
        return;
    }
    double f = overhead_fraction(p);
    if (f < 0.10 || f > 0.90) {
        std::ostringstream os;
        os << where << ": overhead " << f
           << " outside the 10-90% range the approximation is accurate in";
        report.warnings.push_back(os.str());
    }
}

}  // namespace

ValidationReport validate_config(const SlowdownConfig& config,
                                 const Workload* workload) {
    ValidationReport report;
    check_params(config.default_params, "slowdown default", report);

    if (const auto* per_task = std::get_if<PerTaskSchedule>(&config.schedule)) {
        for (const auto& [id, params] : per_task->params) {
            check_params(params, "slowdown task " + std::to_string(id), report);
            if (workload && !workload->find_task(id))
                report.errors.push_back("slowdown task " + std::to_string(id) +
                                        ": no such task");
        }
    } else if (const auto* per_interval =
                   std::get_if<PerIntervalSchedule>(&config.schedule)) {
        Tick prev_end = std::numeric_limits<Tick>::min();
        for (const ScheduleInterval& iv : per_interval->intervals) {
            std::ostringstream name;
            name << "slowdown interval [" << iv.start << ", " << iv.end << ")";
            check_params(iv.params, name.str(), report);
            if (iv.end <= iv.start)
                report.errors.push_back(name.str() + ": empty or inverted");
            if (iv.start < prev_end)
                report.errors.push_back(name.str() +
                                        ": overlaps or out of order");
            prev_end = std::max(prev_end, iv.end);
            if (iv.params.execute >= 1 && iv.params.sleep >= 1 &&
                iv.end - iv.start < 50 * iv.params.cycle())
                report.warnings.push_back(
                    name.str() +
                    ": shorter than 50 cycles; ratio will track poorly");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Distortion metrics

DistortionReport distortion_metrics(const Trace& trace,
                                    const SlowdownConfig& config, Tick window) {
    const auto* slowdown = std::get_if<Slowdown>(&trace.mode);
    if (!slowdown)
        throw std::invalid_argument(
            "distortion_metrics: trace was not produced in Slowdown mode");
    if (window < config.default_params.cycle())
        throw std::invalid_argument(
            "distortion_metrics: window must cover at least one cycle");

    DistortionReport report;
    report.window = window;

    // coverage10 / escaped over finished jobs.
    std::int64_t finished = 0, covered = 0, escaped = 0;
    for (const JobRecord& job : trace.jobs) {
        if (!job.completion) continue;
        ++finished;
        if (job.slowdown_activations_during >= 10) ++covered;
        // Busy span: first service tick to completion. Jobs that never ran
        // (pure-wait bodies are excluded by validation) can't escape.
        if (job.first_busy_tick && job.absorbed_routine_ticks == 0) {
            Tick span = *job.completion - *job.first_busy_tick;
            // Sleep length in force when the job first ran.
            Tick sleep = config.default_params.sleep;
            auto it = std::upper_bound(
                trace.cycles.begin(), trace.cycles.end(), *job.first_busy_tick,
                [](Tick t, const CycleRecord& c) { return t < c.start; });
            if (it != trace.cycles.begin()) sleep = std::prev(it)->params.sleep;
            if (span < sleep) ++escaped;
        }
    }
    report.finished_jobs = finished;
    if (finished > 0) {
        report.coverage10 = static_cast<double>(covered) / finished;
        report.escaped = static_cast<double>(escaped) / finished;
    }

    // Specified routine fraction per tick: the schedule's own demand for
    // Constant/PerInterval; the cycle-sampled choice for PerTask (there is
    // no static per-tick specification in that mode).
    const bool per_task = std::holds_alternative<PerTaskSchedule>(config.schedule);
    auto specified_at = [&](Tick t) -> double {
        if (per_task) {
            auto it = std::upper_bound(
                trace.cycles.begin(), trace.cycles.end(), t,
                [](Tick tick, const CycleRecord& c) { return tick < c.start; });
            if (it != trace.cycles.begin())
                return overhead_fraction(std::prev(it)->params);
            return overhead_fraction(config.default_params);
        }
        return overhead_fraction(active_params(config, t, std::nullopt));
    };

    double worst = 0.0;
    std::int64_t windows = 0;
    for (Tick start = 0; start + window <= trace.horizon; start += window) {
        Tick observed = 0;
        double expected = 0.0;
        for (Tick t = start; t < start + window; ++t) {
            if (trace.attribution[static_cast<std::size_t>(t)] == kAttrRoutine)
                ++observed;
            expected += specified_at(t);
        }
        double deviation = std::abs(static_cast<double>(observed) - expected) /
                           static_cast<double>(window);
        worst = std::max(worst, deviation);
        ++windows;
    }
    report.variation = worst;
    report.windows_measured = windows;
    return report;
}

}  // namespace freqsim
