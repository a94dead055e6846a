#include "freqsim/simcore.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace freqsim {

namespace {

double phi_of(const ExecutionMode& mode) {
    if (const auto* ts = std::get_if<TrueScaling>(&mode)) return ts->phi;
    return 1.0;  // Baseline and Slowdown serve tasks at nominal speed
}

void check_mode(const Workload& workload, const ExecutionMode& mode) {
    if (const auto* ts = std::get_if<TrueScaling>(&mode)) {
        if (!(ts->phi > 0.0) || ts->phi > 1.0)
            throw std::invalid_argument(
                "simulate: frequency fraction must be in (0, 1]");
    } else if (const auto* sd = std::get_if<Slowdown>(&mode)) {
        ValidationReport r = validate_config(sd->config, &workload);
        if (!r.ok())
            throw std::invalid_argument("simulate: " + r.errors.front());
    }
    ValidationReport r = validate(workload);
    if (!r.ok())
        throw SemanticError("simulate: invalid workload: " + r.errors.front());
}

// Per-segment cost under a mode: stretched service for compute, wall
// length for hard waits.
std::vector<Tick> segment_costs(const TaskSpec& task, double phi) {
    std::vector<Tick> costs;
    costs.reserve(task.body.size());
    for (const Segment& seg : task.body)
        costs.push_back(seg.kind == SegmentKind::Compute
                            ? stretched_ticks(seg.length, phi)
                            : seg.length);
    return costs;
}

struct JobProgress {
    Tick release = 0;
    bool entered = false;
    std::size_t seg = 0;
    Tick seg_remaining = 0;   // compute segments
    Tick wait_started = -1;   // hard waits, absolute instants
    Tick wait_end = -1;
    std::optional<Tick> completion;
    Tick busy = 0;
    Tick wait_ticks = 0;
    Tick absorbed = 0;
    std::int64_t activations = 0;
    std::optional<Tick> first_busy;
};

struct TaskRun {
    const TaskSpec* spec = nullptr;
    std::vector<Tick> costs;
    std::vector<JobProgress> jobs;  // release order
    std::size_t current = 0;        // first unfinished job

    bool exhausted() const { return current >= jobs.size(); }
    JobProgress& job() { return jobs[current]; }

    Tick entry_time() const {
        const JobProgress& j = jobs[current];
        Tick prev_done = current > 0 ? *jobs[current - 1].completion : 0;
        return std::max(j.release, prev_done);
    }
    bool in_compute() const {
        if (exhausted()) return false;
        const JobProgress& j = jobs[current];
        return j.entered && j.seg < spec->body.size() &&
               spec->body[j.seg].kind == SegmentKind::Compute &&
               j.seg_remaining > 0;
    }
    bool in_wait() const {
        if (exhausted()) return false;
        const JobProgress& j = jobs[current];
        return j.entered && j.seg < spec->body.size() &&
               spec->body[j.seg].kind == SegmentKind::HardWait;
    }

    // Moves the current job into segment `seg` at instant `now`; returns
    // true when that completed the job.
    bool load_segment(std::size_t seg, Tick now) {
        JobProgress& j = jobs[current];
        j.seg = seg;
        if (seg >= spec->body.size()) {
            j.completion = now;
            ++current;
            return true;
        }
        if (spec->body[seg].kind == SegmentKind::Compute) {
            j.seg_remaining = costs[seg];
        } else {
            j.wait_started = now;
            j.wait_end = now + costs[seg];
        }
        return false;
    }
};

// Entries and wait expirations due at `now`, chased through chains
// (wait end -> job completion -> successor entry at the same instant).
void settle_transitions(std::vector<TaskRun>& tasks, Tick now) {
    for (TaskRun& task : tasks) {
        for (;;) {
            if (task.exhausted()) break;
            JobProgress& j = task.job();
            if (!j.entered) {
                if (task.entry_time() > now) break;
                j.entered = true;
                if (task.load_segment(0, now)) continue;
                break;
            }
            if (task.in_wait() && j.wait_end <= now) {
                if (task.load_segment(j.seg + 1, now)) continue;
                break;
            }
            break;
        }
    }
}

std::optional<TaskId> ready_candidate(const std::vector<TaskRun>& tasks) {
    const TaskRun* best = nullptr;
    for (const TaskRun& task : tasks)
        if (task.in_compute() &&
            (!best || task.spec->priority < best->spec->priority))
            best = &task;
    if (!best) return std::nullopt;
    return best->spec->id;
}

Trace assemble_trace(const Workload& workload, const ExecutionMode& mode,
                     std::vector<TaskRun>& tasks,
                     std::vector<std::int32_t> attribution,
                     std::vector<CycleRecord> cycles) {
    Trace trace;
    trace.attribution = std::move(attribution);
    trace.cycles = std::move(cycles);
    trace.mode = mode;
    trace.horizon = workload.horizon;
    trace.fingerprint = fingerprint(workload);

    std::sort(tasks.begin(), tasks.end(),
              [](const TaskRun& a, const TaskRun& b) {
                  return a.spec->id < b.spec->id;
              });
    for (const TaskRun& task : tasks) {
        for (std::size_t i = 0; i < task.jobs.size(); ++i) {
            const JobProgress& j = task.jobs[i];
            JobRecord rec;
            rec.task_id = task.spec->id;
            rec.job_index = static_cast<std::int64_t>(i);
            rec.release = j.release;
            rec.completion = j.completion;
            rec.absolute_deadline = j.release + task.spec->relative_deadline;
            if (j.completion) {
                rec.missed = *j.completion > rec.absolute_deadline;
            } else {
                rec.missed = rec.absolute_deadline <= workload.horizon;
                rec.inconclusive = !rec.missed;
            }
            rec.slowdown_activations_during = j.activations;
            rec.busy_ticks = j.busy;
            rec.absorbed_routine_ticks = j.absorbed;
            rec.wait_ticks = j.wait_ticks;
            rec.first_busy_tick = j.first_busy;
            trace.jobs.push_back(rec);
        }
    }
    return trace;
}

std::vector<TaskRun> prepare_tasks(const Workload& workload, double phi) {
    std::vector<TaskRun> tasks;
    tasks.reserve(workload.tasks.size());
    for (const TaskSpec& spec : workload.tasks) {
        TaskRun run;
        run.spec = &spec;
        run.costs = segment_costs(spec, phi);
        for (Tick release :
             generate_arrivals(spec, workload.horizon, workload.seed)) {
            JobProgress j;
            j.release = release;
            run.jobs.push_back(j);
        }
        tasks.push_back(std::move(run));
    }
    return tasks;
}

}  // namespace

std::string mode_name(const ExecutionMode& mode) {
    if (std::holds_alternative<Baseline>(mode)) return "baseline";
    if (std::holds_alternative<TrueScaling>(mode)) return "true_scaling";
    return "slowdown";
}

// ---------------------------------------------------------------------------
// Event-driven engine

Trace simulate(const Workload& workload, const ExecutionMode& mode) {
    check_mode(workload, mode);
    const double phi = phi_of(mode);
    const auto* slowdown = std::get_if<Slowdown>(&mode);
    const Tick horizon = workload.horizon;

    std::vector<TaskRun> tasks = prepare_tasks(workload, phi);
    // Scheduling scans in priority order.
    std::vector<TaskRun*> by_priority;
    for (TaskRun& t : tasks) by_priority.push_back(&t);
    std::sort(by_priority.begin(), by_priority.end(),
              [](const TaskRun* a, const TaskRun* b) {
                  return a->spec->priority < b->spec->priority;
              });

    std::vector<std::int32_t> attribution(static_cast<std::size_t>(horizon),
                                          kAttrIdle);
    std::vector<CycleRecord> cycles;

    Tick next_sample = 0, exec_end = 0, cycle_end = 0;

    Tick now = 0;
    while (now < horizon) {
        settle_transitions(tasks, now);

        if (slowdown && now == next_sample) {
            BurstParams params = active_params(slowdown->config, now,
                                               ready_candidate(tasks));
            exec_end = now + params.execute;
            cycle_end = now + params.cycle();
            next_sample = cycle_end;
            cycles.push_back({now, params});
            for (TaskRun& task : tasks)
                for (std::size_t i = task.current;
                     i < task.jobs.size() && task.jobs[i].release <= now; ++i)
                    ++task.jobs[i].activations;
        }

        const bool routine_running = slowdown && now < exec_end;
        TaskRun* running = nullptr;
        if (!routine_running) {
            for (TaskRun* task : by_priority)
                if (task->in_compute()) {
                    running = task;
                    break;
                }
        }

        // Next instant anything can change.
        Tick next = horizon;
        for (const TaskRun& task : tasks) {
            if (task.exhausted()) continue;
            if (!task.jobs[task.current].entered)
                next = std::min(next, task.entry_time());
            else if (task.in_wait())
                next = std::min(next, task.jobs[task.current].wait_end);
        }
        if (slowdown) next = std::min(next, now < exec_end ? exec_end : cycle_end);
        if (running) next = std::min(next, now + running->job().seg_remaining);
        const Tick delta = next - now;

        const std::int32_t code = routine_running ? kAttrRoutine
                                  : running       ? running->spec->id
                                                  : kAttrIdle;
        std::fill(attribution.begin() + static_cast<std::size_t>(now),
                  attribution.begin() + static_cast<std::size_t>(next), code);

        if (routine_running)
            for (TaskRun& task : tasks)
                for (std::size_t i = task.current;
                     i < task.jobs.size() && task.jobs[i].release < next; ++i)
                    task.jobs[i].absorbed +=
                        next - std::max(now, task.jobs[i].release);

        for (TaskRun& task : tasks)
            if (task.in_wait() && task.job().wait_started <= now)
                task.job().wait_ticks += delta;

        if (running) {
            JobProgress& j = running->job();
            if (!j.first_busy) j.first_busy = now;
            j.busy += delta;
            j.seg_remaining -= delta;
            if (j.seg_remaining == 0) running->load_segment(j.seg + 1, next);
        }
        now = next;
    }
    settle_transitions(tasks, horizon);  // completions landing exactly on the edge

    return assemble_trace(workload, mode, tasks, std::move(attribution),
                          std::move(cycles));
}

// ---------------------------------------------------------------------------
// Tick-by-tick oracle
//
// Deliberately naive: every tick rescans every task and every in-flight
// job, no event arithmetic. Keep this boring; it is the reference the
// engine above is judged against.

Trace brute_force_simulate(const Workload& workload, const ExecutionMode& mode,
                           std::int64_t cap) {
    check_mode(workload, mode);
    const std::int64_t effort =
        workload.horizon *
        std::max<std::int64_t>(1, static_cast<std::int64_t>(workload.tasks.size()));
    if (effort > cap)
        throw CapExceeded("brute_force_simulate: horizon * tasks = " +
                          std::to_string(effort) + " exceeds cap " +
                          std::to_string(cap));

    const double phi = phi_of(mode);
    const auto* slowdown = std::get_if<Slowdown>(&mode);
    const Tick horizon = workload.horizon;

    std::vector<TaskRun> tasks = prepare_tasks(workload, phi);
    std::vector<std::int32_t> attribution(static_cast<std::size_t>(horizon),
                                          kAttrIdle);
    std::vector<CycleRecord> cycles;

    Tick cycle_start = 0, exec_end = 0, cycle_end = 0;

    for (Tick t = 0; t < horizon; ++t) {
        settle_transitions(tasks, t);

        if (slowdown && t == cycle_start) {
            BurstParams params =
                active_params(slowdown->config, t, ready_candidate(tasks));
            exec_end = t + params.execute;
            cycle_end = t + params.cycle();
            cycles.push_back({t, params});
            for (TaskRun& task : tasks)
                for (JobProgress& j : task.jobs)
                    if (j.release <= t && !j.completion) ++j.activations;
        }

        if (slowdown && t < exec_end) {
            attribution[static_cast<std::size_t>(t)] = kAttrRoutine;
            for (TaskRun& task : tasks)
                for (JobProgress& j : task.jobs)
                    if (j.release <= t && !j.completion) ++j.absorbed;
        } else {
            TaskRun* pick = nullptr;
            for (TaskRun& task : tasks)
                if (task.in_compute() &&
                    (!pick || task.spec->priority < pick->spec->priority))
                    pick = &task;
            if (pick) {
                JobProgress& j = pick->job();
                attribution[static_cast<std::size_t>(t)] = pick->spec->id;
                if (!j.first_busy) j.first_busy = t;
                ++j.busy;
                --j.seg_remaining;
                if (j.seg_remaining == 0) pick->load_segment(j.seg + 1, t + 1);
            }
        }

        for (TaskRun& task : tasks)
            if (task.in_wait() && task.job().wait_started <= t)
                ++task.job().wait_ticks;

        if (slowdown && t + 1 == cycle_end) cycle_start = cycle_end;
    }
    settle_transitions(tasks, horizon);

    return assemble_trace(workload, mode, tasks, std::move(attribution),
                          std::move(cycles));
}

// ---------------------------------------------------------------------------
// Trace helpers

Tick Trace::task_ticks() const {
    return static_cast<Tick>(
        std::count_if(attribution.begin(), attribution.end(),
                      [](std::int32_t a) { return a >= 0; }));
}

Tick Trace::routine_ticks() const {
    return static_cast<Tick>(
        std::count(attribution.begin(), attribution.end(), kAttrRoutine));
}

Tick Trace::idle_ticks() const {
    return static_cast<Tick>(
        std::count(attribution.begin(), attribution.end(), kAttrIdle));
}

std::int64_t Trace::missed_count() const {
    return std::count_if(jobs.begin(), jobs.end(),
                         [](const JobRecord& j) { return j.missed; });
}

std::int64_t Trace::inconclusive_count() const {
    return std::count_if(jobs.begin(), jobs.end(),
                         [](const JobRecord& j) { return j.inconclusive; });
}

double measure_utilization(const Trace& trace) {
    if (trace.horizon <= 0) return 0.0;
    return static_cast<double>(trace.task_ticks()) /
           static_cast<double>(trace.horizon);
}

bool traces_equal(const Trace& a, const Trace& b) {
    if (a.horizon != b.horizon || a.attribution != b.attribution) return false;
    if (a.cycles.size() != b.cycles.size()) return false;
    for (std::size_t i = 0; i < a.cycles.size(); ++i)
        if (a.cycles[i].start != b.cycles[i].start ||
            !(a.cycles[i].params == b.cycles[i].params))
            return false;
    if (a.jobs.size() != b.jobs.size()) return false;
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        const JobRecord &x = a.jobs[i], &y = b.jobs[i];
        if (x.task_id != y.task_id || x.job_index != y.job_index ||
            x.release != y.release || x.completion != y.completion ||
            x.absolute_deadline != y.absolute_deadline ||
            x.missed != y.missed || x.inconclusive != y.inconclusive ||
            x.slowdown_activations_during != y.slowdown_activations_during ||
            x.busy_ticks != y.busy_ticks ||
            x.absorbed_routine_ticks != y.absorbed_routine_ticks ||
            x.wait_ticks != y.wait_ticks || x.first_busy_tick != y.first_busy_tick)
            return false;
    }
    return true;
}

}  // namespace freqsim
