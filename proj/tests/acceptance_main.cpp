// Acceptance harness: one pass/fail line per criterion, nonzero exit on
// any failure. Each criterion is self-contained and rebuilds its own
// inputs; the CLI determinism check shells out to the freqsim binary.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "freqsim/analysis.hpp"
#include "freqsim/scenario.hpp"
#include "freqsim/search.hpp"
#include "freqsim/simcore.hpp"
#include "freqsim/slowdown.hpp"
#include "freqsim/taskgen.hpp"
#include "freqsim/workload.hpp"
#include "support/random_workloads.hpp"

using namespace freqsim;
using nlohmann::json;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& detail) {
    if (!condition) throw Failure(detail);
}

Workload single_task(Tick compute, Tick deadline, Tick period, Tick horizon) {
    TaskSpec t;
    t.id = 0;
    t.priority = 0;
    t.arrivals = PeriodicArrivals{period, 0, 0};
    t.body = {{SegmentKind::Compute, compute}};
    t.relative_deadline = deadline;
    Workload w;
    w.tasks = {t};
    w.horizon = horizon;
    return w;
}

SlowdownConfig constant(Tick execute, Tick sleep) {
    return {{execute, sleep}, ConstantSchedule{}};
}

// --------------------------------------------------------------- criterion 1

void criterion_ratio_law() {
    const std::vector<BurstParams> pairs = {{1, 3}, {1, 1}, {2, 3}, {9, 1}};
    for (const BurstParams& p : pairs) {
        const Tick horizon = 100000 * p.cycle();

        Workload idle;
        idle.horizon = horizon;
        Trace bare = simulate(idle, Slowdown{constant(p.execute, p.sleep)});
        require(bare.routine_ticks() * p.cycle() == p.execute * horizon,
                "idle routine fraction not exactly E/(E+S) for E=" +
                    std::to_string(p.execute) + " S=" + std::to_string(p.sleep));

        Workload loaded;
        loaded.horizon = horizon;
        TaskSpec a = single_task(2, 10, 10, horizon).tasks[0];
        TaskSpec b = single_task(6, 20, 20, horizon).tasks[0];
        b.id = 1;
        b.priority = 1;
        loaded.tasks = {a, b};
        require(nominal_utilization(loaded) == 0.5, "load is not 50%");
        Trace busy = simulate(loaded, Slowdown{constant(p.execute, p.sleep)});
        double fraction = static_cast<double>(busy.routine_ticks()) /
                          static_cast<double>(horizon);
        require(std::abs(fraction - overhead_fraction(p)) <= 0.01,
                "loaded routine fraction off by more than 0.01 for E=" +
                    std::to_string(p.execute) + " S=" + std::to_string(p.sleep));
    }
}

// --------------------------------------------------------------- criterion 2

void criterion_oracle_equivalence() {
    const std::vector<double> phis = {0.3, 0.45, 0.6, 0.75, 0.9, 1.0};
    const std::vector<BurstParams> params = {{1, 3}, {1, 1}, {2, 3},
                                             {3, 5}, {9, 1}, {2, 6}};
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Workload w =
            testing::random_workload(seed, 5, 10000, seed % 2 == 0);
        ExecutionMode scaling = TrueScaling{phis[seed % phis.size()]};
        BurstParams p = params[seed % params.size()];
        ExecutionMode slowdown = Slowdown{constant(p.execute, p.sleep)};
        for (const ExecutionMode& mode : {scaling, slowdown}) {
            Trace fast = simulate(w, mode);
            Trace brute = brute_force_simulate(w, mode);
            require(traces_equal(fast, brute),
                    "trace mismatch at seed " + std::to_string(seed));
        }
    }
}

// --------------------------------------------------------------- criterion 3

void criterion_monotonicity() {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Workload w = testing::random_workload(seed, 4, 2000, false);
        bool seen_schedulable = false;
        for (int k = 1; k <= 20; ++k) {
            double phi = static_cast<double>(k) / 20.0;
            bool ok = is_schedulable(simulate(w, TrueScaling{phi}));
            require(!seen_schedulable || ok,
                    "schedulable at a lower phi but not at " +
                        std::to_string(phi) + ", seed " + std::to_string(seed));
            seen_schedulable = seen_schedulable || ok;
        }
    }
}

// --------------------------------------------------------------- criterion 4

void criterion_burst_granularity() {
    // Coarse bursts: one 1-tick job with a 2-tick deadline. The 2-tick
    // execute burst pushes completion to 3; true scaling finishes at 2.
    Workload tight;
    TaskSpec t;
    t.id = 0;
    t.priority = 0;
    t.arrivals = TraceArrivals{{0}};
    t.body = {{SegmentKind::Compute, 1}};
    t.relative_deadline = 2;
    tight.tasks = {t};
    tight.horizon = 16;

    Trace coarse = simulate(tight, Slowdown{constant(2, 6)});
    require(coarse.jobs.size() == 1 && coarse.jobs[0].completion == Tick{3},
            "coarse-burst completion is not tick 3");
    require(coarse.missed_count() == 1, "coarse bursts should miss");

    Trace scaled = simulate(tight, TrueScaling{0.75});
    require(scaled.jobs[0].completion == Tick{2} && scaled.missed_count() == 0,
            "true scaling at 0.75 should finish at tick 2 and pass");

    // Fine bursts at the same ratio agree with true scaling tick for tick.
    Workload longer = tight;
    longer.tasks[0].body = {{SegmentKind::Compute, 6}};
    longer.tasks[0].relative_deadline = 9;

    Trace fine = simulate(longer, Slowdown{constant(1, 3)});
    Trace fine_scaled = simulate(longer, TrueScaling{0.75});
    require(fine.jobs[0].completion == Tick{8} &&
                fine_scaled.jobs[0].completion == Tick{8},
            "fine bursts and true scaling should both complete at tick 8");
    require(fine.missed_count() == 0 && fine_scaled.missed_count() == 0,
            "fine-burst runs should meet the 9-tick deadline");
}

// --------------------------------------------------------------- criterion 5

void criterion_short_activation_escape() {
    // Releases at phase 5 of a 12-tick period land inside the sleep of a
    // (4,8) routine; 2-tick jobs finish before the next burst.
    Workload w = single_task(2, 12, 12, 1200);
    std::get<PeriodicArrivals>(w.tasks[0].arrivals).phase = 5;

    SlowdownConfig wide = constant(4, 8);
    Trace escaped_trace = simulate(w, Slowdown{wide});
    DistortionReport wide_report = distortion_metrics(escaped_trace, wide, 120);
    require(wide_report.escaped > 0.0, "no jobs escaped the (4,8) routine");

    // Halving to (2,4) makes every busy span reach the sleep length, so
    // every job absorbs routine ticks and none escape.
    SlowdownConfig halved = constant(2, 4);
    Trace absorbed_trace = simulate(w, Slowdown{halved});
    DistortionReport halved_report =
        distortion_metrics(absorbed_trace, halved, 120);
    require(halved_report.escaped == 0.0, "jobs still escape at (2,4)");
    for (const JobRecord& job : absorbed_trace.jobs)
        if (job.completion)
            require(job.absorbed_routine_ticks > 0,
                    "a finished job absorbed no routine ticks at (2,4)");
}

// --------------------------------------------------------------- criterion 6

void criterion_binary_search() {
    Workload w = single_task(4, 8, 100, 1000);

    SearchResult result =
        min_frequency_search(w, SearchFamily::TrueScaling, {});
    require(result.min_phi.has_value(), "search reported unschedulable");
    require(*result.min_phi >= 0.50 && *result.min_phi <= 0.51,
            "min_phi " + std::to_string(*result.min_phi) +
                " outside [0.50, 0.51]");
    const std::size_t budget =
        static_cast<std::size_t>(std::ceil(std::log2(1.0 / 0.01))) + 2;
    require(result.probes.size() <= budget,
            std::to_string(result.probes.size()) + " probes exceed budget " +
                std::to_string(budget));
    require(result.probes[0].phi == 1.0, "first probe is not phi = 1");

    // Fine sweep oracle: smallest schedulable phi on a 0.005 grid.
    double sweep = 1.0;
    for (int k = 200; k >= 1; --k) {
        double phi = static_cast<double>(k) / 200.0;
        if (!is_schedulable(simulate(w, TrueScaling{phi}))) break;
        sweep = phi;
    }
    require(std::abs(*result.min_phi - sweep) <= 0.01,
            "bisection result disagrees with the 0.005-step sweep at " +
                std::to_string(sweep));

    // Warm start 0.5 passes here: the next probe moves to the low side.
    SearchOptions from_half;
    from_half.start = 0.5;
    SearchResult pass_side =
        min_frequency_search(w, SearchFamily::TrueScaling, from_half);
    require(pass_side.probes.size() >= 3 && pass_side.probes[1].schedulable,
            "warm-start probe at 0.5 did not pass");
    require(pass_side.probes[2].phi > 0.2 && pass_side.probes[2].phi < 0.3,
            "after a pass at 0.5 the next probe should test near 0.25");

    // On a 6-tick deadline 0.5 fails: the next probe moves to 0.75.
    Workload harder = single_task(4, 6, 100, 1000);
    SearchResult fail_side =
        min_frequency_search(harder, SearchFamily::TrueScaling, from_half);
    require(fail_side.probes.size() >= 3 && !fail_side.probes[1].schedulable,
            "warm-start probe at 0.5 unexpectedly passed");
    require(std::abs(fail_side.probes[2].phi - 0.75) < 1e-9,
            "after a fail at 0.5 the next probe should test 0.75");
}

// --------------------------------------------------------------- criterion 7

void criterion_naive_gap() {
    // Utilization 0.04, but ceil(4/phi) <= 5 forces phi >= 0.8.
    Workload w = single_task(4, 5, 100, 10000);
    double naive = naive_estimate(w);
    require(std::abs(naive - 0.04) < 1e-12,
            "naive estimate is not the 0.04 utilization");

    SearchResult result =
        min_frequency_search(w, SearchFamily::TrueScaling, {});
    require(result.min_phi.has_value(), "search reported unschedulable");
    require(*result.min_phi >= 0.8 && *result.min_phi <= 0.81,
            "min_phi " + std::to_string(*result.min_phi) +
                " not within one tolerance of 0.8");
    require(*result.min_phi - naive > 0.7,
            "the deadline-driven minimum does not dwarf the estimate");
}

// --------------------------------------------------------------- criterion 8

void criterion_hard_wait_invariance() {
    const std::vector<ExecutionMode> modes = {
        Baseline{}, TrueScaling{0.5}, Slowdown{constant(1, 1)}};
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 50; ++seed) {
        require(seed < 500, "could not find 50 workloads with waits");
        Workload w = testing::random_workload(seed, 4, 3000, true);
        if (!w.has_wait()) continue;
        ++checked;

        // (task, job) -> wait ticks, finished jobs only.
        std::vector<std::map<std::pair<TaskId, std::int64_t>, Tick>> waits;
        for (const ExecutionMode& mode : modes) {
            Trace trace = simulate(w, mode);
            auto& per_job = waits.emplace_back();
            for (const JobRecord& job : trace.jobs)
                if (job.completion)
                    per_job[{job.task_id, job.job_index}] = job.wait_ticks;
        }
        for (const auto& [key, wait] : waits[0]) {
            for (std::size_t m = 1; m < waits.size(); ++m) {
                auto it = waits[m].find(key);
                if (it == waits[m].end()) continue;  // unfinished there
                require(it->second == wait,
                        "wait time changed across modes at seed " +
                            std::to_string(seed));
            }
        }
    }
}

// --------------------------------------------------------------- criterion 9

void criterion_interval_adherence() {
    auto run = [](Tick scale, double tolerance) {
        PerIntervalSchedule schedule;
        const std::vector<BurstParams> plan = {{1, 3}, {1, 1}, {2, 3}};
        Tick at = 0;
        for (const BurstParams& p : plan) {
            Tick end = at + scale * p.cycle();
            schedule.intervals.push_back({at, end, p});
            at = end;
        }
        SlowdownConfig config{{1, 1}, schedule};

        Workload idle;
        idle.horizon = at;
        Trace trace = simulate(idle, Slowdown{config});

        for (const ScheduleInterval& iv : schedule.intervals) {
            Tick routine = 0;
            for (Tick t = iv.start; t < iv.end; ++t)
                if (trace.attribution[static_cast<std::size_t>(t)] ==
                    kAttrRoutine)
                    ++routine;
            double observed = static_cast<double>(routine) /
                              static_cast<double>(iv.end - iv.start);
            require(std::abs(observed - overhead_fraction(iv.params)) <=
                        tolerance,
                    "interval fraction off by more than " +
                        std::to_string(tolerance) + " at scale " +
                        std::to_string(scale));
        }
    };
    run(50, 0.05);
    run(1000, 0.02);
}

// -------------------------------------------------------------- criterion 10

void criterion_rm_bound_sufficient() {
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 100; ++seed) {
        require(seed < 5000, "could not find 100 sets under the bound");
        GenOptions options;
        options.tasks = 2 + static_cast<int>(seed % 4);
        options.target_utilization = 0.6;
        options.seed = seed;
        options.period_min = 8;
        options.period_max = 24;
        Workload w = generate_random_workload(options);

        std::optional<Tick> hyper = hyperperiod(w);
        if (!hyper || *hyper > 2'000'000) continue;
        if (rm_utilization_check(w, 1.0).verdict != RmVerdict::Schedulable)
            continue;
        ++checked;

        w.horizon = *hyper;
        Trace trace = simulate(w, Baseline{});
        require(trace.missed_count() == 0,
                "a bound-certified set missed a deadline at seed " +
                    std::to_string(seed));
    }
}

// -------------------------------------------------------------- criterion 11

void criterion_cli_determinism() {
    const std::string cli = FREQSIM_CLI_PATH;
    const std::string dir = FREQSIM_SCENARIO_DIR;
    const std::string out_a = "acceptance_out_a.json";
    const std::string out_b = "acceptance_out_b.json";

    auto run_once = [&](const std::string& args, const std::string& out) {
        std::string cmd =
            "\"" + cli + "\" " + args + " --out " + out + " 2>/dev/null";
        int status = std::system(cmd.c_str());
        int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        require(code == 0 || code == 1, "CLI failed (" + std::to_string(code) +
                                            "): " + args);
        return code;
    };
    auto scrubbed = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        require(static_cast<bool>(in), "missing CLI output " + path);
        json doc = json::parse(in);
        if (doc.is_object()) doc.erase("meta");
        return doc.dump();
    };

    const std::vector<std::string> invocations = {
        "validate --scenario " + dir + "/basic_periodic.json",
        "simulate --mode true:0.75 --trace --scenario " + dir +
            "/basic_periodic.json",
        "simulate --mode slowdown --scenario " + dir + "/hard_delays.json",
        "search --family true --scenario " + dir + "/tight_deadline.json",
        "search --family slowdown --scenario " + dir +
            "/mixed_stochastic.json",
        "compare --grid 0.25:1.0:0.25 --scenario " + dir +
            "/basic_periodic.json",
        "distort --window 500 --scenario " + dir + "/hard_delays.json",
        "gen --tasks 4 --util 0.6 --seed 7",
    };
    for (const std::string& args : invocations) {
        int code_a = run_once(args, out_a);
        int code_b = run_once(args, out_b);
        require(code_a == code_b, "exit code changed between runs: " + args);
        require(scrubbed(out_a) == scrubbed(out_b),
                "output differs between runs: " + args);
    }
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "routine overhead equals E/(E+S), exactly when idle and within "
            "0.01 under a 50% load",
         criterion_ratio_law},
        {2, "event-driven simulator matches the brute-force oracle tick for "
            "tick on 200 random workloads",
         criterion_oracle_equivalence},
        {3, "wait-free schedulability is monotone in frequency over a "
            "20-point grid on 200 random workloads",
         criterion_monotonicity},
        {4, "coarse bursts miss where true scaling at 0.75 passes; fine "
            "bursts agree tick for tick",
         criterion_burst_granularity},
        {5, "short activations escape the routine and absorb it once the "
            "bursts are halved",
         criterion_short_activation_escape},
        {6, "bisection lands in [0.50, 0.51] within the probe budget and "
            "matches a 0.005-step sweep",
         criterion_binary_search},
        {7, "utilization estimate 0.04 versus a deadline-driven minimum "
            "frequency of 0.8",
         criterion_naive_gap},
        {8, "hard-wait wall time is invariant across execution modes on 50 "
            "random workloads",
         criterion_hard_wait_invariance},
        {9, "per-interval routine fractions track the schedule within 0.05 "
            "at 50 cycles and 0.02 at 1000",
         criterion_interval_adherence},
        {10, "100 task sets certified by the utilization bound run a full "
             "hyperperiod without misses",
         criterion_rm_bound_sufficient},
        {11, "repeated CLI invocations are byte-identical outside the meta "
             "block",
         criterion_cli_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string verdict = "[PASS]";
        std::string detail;
        try {
            criterion.run();
        } catch (const std::exception& e) {
            verdict = "[FAIL]";
            detail = std::string(" -- ") + e.what();
            ++failures;
        }
        std::cout << verdict << " criterion " << criterion.id << ": "
                  << criterion.label << detail << "\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/"
              << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
