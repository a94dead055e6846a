#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freqsim/slowdown.hpp"
#include "freqsim/types.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

// ---------------------------------------------------------------------------
// Execution modes

struct Baseline {
    friend bool operator==(const Baseline&, const Baseline&) = default;
};

// Real frequency scaling: every compute segment of length L takes
// ceil(L / phi) service ticks; hard waits are untouched.
struct TrueScaling {
    double phi = 1.0;  // fraction of nominal, in (0, 1]

    friend bool operator==(const TrueScaling&, const TrueScaling&) = default;
};

// Software approximation: tasks run at nominal speed but an artificial
// highest-priority routine burns execute-burst ticks on a fixed cadence.
struct Slowdown {
    SlowdownConfig config;

    friend bool operator==(const Slowdown&, const Slowdown&) = default;
};

using ExecutionMode = std::variant<Baseline, TrueScaling, Slowdown>;

std::string mode_name(const ExecutionMode& mode);

// Service ticks for a compute segment of length `length` at fraction phi.
// ceil never under-reports demand, so "schedulable" verdicts are safe.
inline Tick stretched_ticks(Tick length, double phi) {
    return static_cast<Tick>(std::ceil(static_cast<double>(length) / phi));
}

// ---------------------------------------------------------------------------
// Trace

// Per-tick processor attribution: task id, or one of the two sentinels.
inline constexpr std::int32_t kAttrIdle = -1;
inline constexpr std::int32_t kAttrRoutine = -2;

struct JobRecord {
    TaskId task_id = 0;
    std::int64_t job_index = 0;         // per-task release order
    Tick release = 0;
    std::optional<Tick> completion;     // absent if unfinished at horizon
    Tick absolute_deadline = 0;         // release + relative_deadline
    bool missed = false;
    // Unfinished at horizon with the deadline still in the future: the
    // verdict can't count it either way.
    bool inconclusive = false;
    std::int64_t slowdown_activations_during = 0;  // bursts started in flight
    Tick busy_ticks = 0;                // service ticks consumed
    Tick absorbed_routine_ticks = 0;    // routine ticks while in flight
    Tick wait_ticks = 0;                // hard-wait wall time elapsed
    std::optional<Tick> first_busy_tick;
};

// One routine cycle as actually scheduled (Slowdown mode only).
struct CycleRecord {
    Tick start = 0;
    BurstParams params;
};

struct Trace {
    std::vector<std::int32_t> attribution;  // one entry per tick in [0, horizon)
    std::vector<JobRecord> jobs;            // sorted by (task_id, job_index)
    std::vector<CycleRecord> cycles;        // Slowdown mode only
    ExecutionMode mode;
    Tick horizon = 0;
    WorkloadFingerprint fingerprint;

    Tick task_ticks() const;
    Tick routine_ticks() const;
    Tick idle_ticks() const;
    std::int64_t missed_count() const;
    std::int64_t inconclusive_count() const;
};

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Simulation

// Event-driven preemptive fixed-priority simulation over [0, horizon).
// Deterministic: a pure function of (workload, mode).
Trace simulate(const Workload& workload, const ExecutionMode& mode);

// Same contract as simulate(), as a naive tick-by-tick loop with no event
// queue; exists to cross-check simulate(). Throws CapExceeded when
// horizon * max(1, tasks) > cap.
Trace brute_force_simulate(const Workload& workload, const ExecutionMode& mode,
                           std::int64_t cap = kDefaultBruteForceCap);

// Task-attributed ticks / horizon. Slowdown-routine ticks excluded; the
// workload measurement the naive estimator builds on.
double measure_utilization(const Trace& trace);

bool traces_equal(const Trace& a, const Trace& b);

}  // namespace freqsim
