#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "freqsim/types.hpp"

namespace freqsim {

// ---------------------------------------------------------------------------
// Errors

// Malformed scenario/workload text (bad JSON, wrong types). Carries the
// parser's byte offset translated to a line number where available.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model invariant
// (duplicate priority, zero period, empty body, ...).
class SemanticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types

enum class SegmentKind { Compute, HardWait };

// One step of a job body. Compute length is the cycle cost expressed in
// ticks at nominal frequency; HardWait length is wall-clock ticks that no
// frequency change can stretch or compress.
struct Segment {
    SegmentKind kind = SegmentKind::Compute;
    Tick length = 1;

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct PeriodicArrivals {
    Tick period = 1;
    Tick phase = 0;   // release offset of job 0
    Tick jitter = 0;  // per-job uniform draw in [0, jitter]; must be < period

    friend bool operator==(const PeriodicArrivals&, const PeriodicArrivals&) = default;
};

struct PoissonArrivals {
    Tick mean_gap = 1;
    Tick min_gap = 1;  // hard lower bound on inter-arrival gaps

    friend bool operator==(const PoissonArrivals&, const PoissonArrivals&) = default;
};

struct TraceArrivals {
    std::vector<Tick> releases;  // strictly increasing

    friend bool operator==(const TraceArrivals&, const TraceArrivals&) = default;
};

using ArrivalModel = std::variant<PeriodicArrivals, PoissonArrivals, TraceArrivals>;

struct TaskSpec {
    TaskId id = 0;
    int priority = 0;  // smaller = higher priority; unique across the set
    ArrivalModel arrivals;
    std::vector<Segment> body;  // executed in order by every job
    Tick relative_deadline = 1;

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;

    Tick total_compute() const;
    bool has_wait() const;
};

struct Workload {
    std::vector<TaskSpec> tasks;
    Tick horizon = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const Workload&, const Workload&) = default;

    const TaskSpec* find_task(TaskId id) const;
    bool has_wait() const;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    double nominal_utilization = 0.0;  // sum over periodic tasks of compute/period

    bool ok() const { return errors.empty(); }
};

struct WorkloadFingerprint {
    std::uint64_t seed = 0;
    std::uint64_t hash = 0;  // FNV-1a 64 of the canonical workload JSON

    friend bool operator==(const WorkloadFingerprint&, const WorkloadFingerprint&) = default;
};

// ---------------------------------------------------------------------------
// Operations

// Deterministic release times in [0, horizon), strictly increasing.
// Pure in (task, horizon, seed); repeated calls are identical.
std::vector<Tick> generate_arrivals(const TaskSpec& task, Tick horizon,
                                    std::uint64_t seed);

ValidationReport validate(const Workload& workload);

// Parses a workload JSON document (see docs/scenario_format.md), applies
// defaults (phase = 0, jitter = 0) and validates. Throws ParseError on
// malformed text, SemanticError on invariant violations.
Workload parse_workload(const std::string& text);

// Canonical JSON text; parse_workload(serialize_workload(w)) == w.
std::string serialize_workload(const Workload& workload);

double nominal_utilization(const Workload& workload);

// seed + FNV-1a 64 over the canonical workload JSON; embedded in every
// report and trace for provenance.
WorkloadFingerprint fingerprint(const Workload& workload);

}  // namespace freqsim
