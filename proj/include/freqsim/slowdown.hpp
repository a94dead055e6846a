#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "freqsim/types.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

struct Trace;  // simcore.hpp

// ---------------------------------------------------------------------------
// Slowdown-routine parameterization.
//
// The routine alternates an execute burst of E ticks with a sleep of S
// ticks at the highest priority. E/(E+S) is the CPU share it consumes;
// S/(E+S) times nominal is the frequency it models.

struct BurstParams {
    Tick execute = 1;  // E >= 1
    Tick sleep = 1;    // S >= 1

    Tick cycle() const { return execute + sleep; }

    friend bool operator==(const BurstParams&, const BurstParams&) = default;
};

struct ConstantSchedule {
    friend bool operator==(const ConstantSchedule&, const ConstantSchedule&) = default;
};

// Ratio switched per running task: the candidate is the highest-priority
// ready task sampled at each routine-cycle start.
struct PerTaskSchedule {
    std::map<TaskId, BurstParams> params;

    friend bool operator==(const PerTaskSchedule&, const PerTaskSchedule&) = default;
};

struct ScheduleInterval {
    Tick start = 0;
    Tick end = 0;  // half-open [start, end)
    BurstParams params;

    friend bool operator==(const ScheduleInterval&, const ScheduleInterval&) = default;
};

// Ratio switched per time interval; intervals non-overlapping and sorted.
struct PerIntervalSchedule {
    std::vector<ScheduleInterval> intervals;

    friend bool operator==(const PerIntervalSchedule&, const PerIntervalSchedule&) = default;
};

using SlowdownSchedule =
    std::variant<ConstantSchedule, PerTaskSchedule, PerIntervalSchedule>;

struct SlowdownConfig {
    BurstParams default_params;
    SlowdownSchedule schedule = ConstantSchedule{};

    friend bool operator==(const SlowdownConfig&, const SlowdownConfig&) = default;
};

// Approximation-quality metrics. All fields in [0, 1].
struct DistortionReport {
    // Fraction of finished jobs with >= 10 routine activations while in
    // flight; the granularity condition for low overhead variation.
    double coverage10 = 0.0;
    // Fraction of finished jobs whose busy span is shorter than the sleep
    // time in force and that absorbed zero routine ticks.
    double escaped = 0.0;
    // Max over tiling windows of |observed routine fraction - specified|.
    double variation = 0.0;
    Tick window = 0;
    std::int64_t finished_jobs = 0;
    std::int64_t windows_measured = 0;
};

// ---------------------------------------------------------------------------
// Operations

// E/(E+S): CPU share consumed by the routine.
double overhead_fraction(const BurstParams& params);

// S/(E+S) * f_nominal: the frequency the routine models.
// overhead_fraction(p) + modeled_frequency(p, 1) == 1 exactly.
double modeled_frequency(const BurstParams& params, double f_nominal);

// Inverse: burst pair whose modeled fraction is closest to target_phi,
// ties broken toward the smallest cycle, then the smallest execute burst.
// Smaller cycles distort the schedule less. Throws std::invalid_argument
// if max_cycle < 2 or target_phi outside (0, 1).
BurstParams params_for_target(double target_phi, Tick max_cycle);

// Params in force for the routine cycle starting at `now`. The candidate
// is the highest-priority ready task at the cycle start (PerTask only);
// the returned params hold for the whole cycle.
BurstParams active_params(const SlowdownConfig& config, Tick now,
                          std::optional<TaskId> running_candidate);

// Config-level invariant check. `workload` enables the PerTask key check.
// Warnings: overhead outside [0.10, 0.90], intervals shorter than 50
// cycles of their own params. Warnings never block execution.
ValidationReport validate_config(const SlowdownConfig& config,
                                 const Workload* workload);

// Computes coverage10 / escaped / variation from a Slowdown-mode trace.
// Windows tile [0, horizon); the last partial window is dropped.
// Throws std::invalid_argument unless the trace is from Slowdown mode and
// window >= the default cycle length.
DistortionReport distortion_metrics(const Trace& trace,
                                    const SlowdownConfig& config, Tick window);

}  // namespace freqsim
