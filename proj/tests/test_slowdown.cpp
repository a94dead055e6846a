#include <doctest.h>

#include <cmath>

#include "freqsim/simcore.hpp"
#include "freqsim/slowdown.hpp"
#include "support/random_workloads.hpp"

using namespace freqsim;

TEST_CASE("overhead fraction is E/(E+S)") {
    CHECK(overhead_fraction({1, 3}) == 0.25);
    CHECK(overhead_fraction({1, 1}) == 0.5);
    CHECK(overhead_fraction({9, 1}) == 0.9);
}

TEST_CASE("modeled frequency is S/(E+S) times nominal") {
    CHECK(modeled_frequency({1, 3}, 1.0) == 0.75);
    CHECK(modeled_frequency({1, 1}, 100e6) == 50e6);
}

TEST_CASE("overhead + modeled fraction is exactly 1") {
    for (Tick e = 1; e <= 12; ++e)
        for (Tick s = 1; s <= 12; ++s) {
            BurstParams p{e, s};
            CHECK(overhead_fraction(p) + modeled_frequency(p, 1.0) == 1.0);
        }
}

TEST_CASE("params_for_target inverts the modeled frequencies") {
    CHECK(params_for_target(0.75, 16) == BurstParams{1, 3});
    CHECK(params_for_target(0.6, 16) == BurstParams{2, 3});
    CHECK(params_for_target(0.5, 16) == BurstParams{1, 1});
}

TEST_CASE("params_for_target agrees with an exhaustive scan") {
    // Independent oracle: scan every (e, s), prefer smaller error, then
    // smaller cycle, then smaller execute.
    auto oracle = [](double target, Tick max_cycle) {
        BurstParams best{0, 0};
        double best_err = 2.0;
        for (Tick cycle = 2; cycle <= max_cycle; ++cycle)
            for (Tick e = 1; e < cycle; ++e) {
                double err = std::abs(
                    static_cast<double>(cycle - e) / static_cast<double>(cycle) -
                    target);
                if (err < best_err - 1e-15) {
                    best = {e, cycle - e};
                    best_err = err;
                }
            }
        return best;
    };
    for (int k = 1; k <= 99; ++k) {
        double target = k / 100.0;
        CAPTURE(target);
        CHECK(params_for_target(target, 16) == oracle(target, 16));
        CHECK(params_for_target(target, 7) == oracle(target, 7));
    }
}

TEST_CASE("params_for_target error never grows with the cycle budget") {
    for (double target : {0.13, 0.37, 0.62, 0.85}) {
        double prev = 2.0;
        for (Tick budget = 2; budget <= 40; ++budget) {
            double err = std::abs(
                modeled_frequency(params_for_target(target, budget), 1.0) -
                target);
            CHECK(err <= prev + 1e-15);
            prev = err;
        }
    }
}

TEST_CASE("params_for_target rejects bad input") {
    CHECK_THROWS_AS(params_for_target(0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(params_for_target(0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(params_for_target(1.0, 16), std::invalid_argument);
}

TEST_CASE("active_params resolves the schedule") {
    SUBCASE("constant ignores time and candidate") {
        SlowdownConfig config{{1, 3}};
        CHECK(active_params(config, 0, std::nullopt) == BurstParams{1, 3});
        CHECK(active_params(config, 987, TaskId{4}) == BurstParams{1, 3});
    }
    SUBCASE("per task follows the running candidate") {
        SlowdownConfig config{{2, 2}};
        PerTaskSchedule sched;
        sched.params[1] = {1, 1};  // 50% slowdown while task 1 runs
        sched.params[2] = {1, 3};  // 25% while task 2 runs
        config.schedule = sched;
        CHECK(active_params(config, 0, TaskId{1}) == BurstParams{1, 1});
        CHECK(active_params(config, 0, TaskId{2}) == BurstParams{1, 3});
        CHECK(active_params(config, 0, TaskId{9}) == BurstParams{2, 2});
        CHECK(active_params(config, 0, std::nullopt) == BurstParams{2, 2});
    }
    SUBCASE("per interval looks up the containing interval") {
        SlowdownConfig config{{2, 2}};
        config.schedule = PerIntervalSchedule{
            {{0, 1000, {1, 3}}, {1000, 2000, {1, 1}}}};
        CHECK(active_params(config, 1500, std::nullopt) == BurstParams{1, 1});
        CHECK(active_params(config, 0, std::nullopt) == BurstParams{1, 3});
        CHECK(active_params(config, 999, std::nullopt) == BurstParams{1, 3});
        CHECK(active_params(config, 2500, std::nullopt) == BurstParams{2, 2});
    }
}

TEST_CASE("validate_config flags errors and accuracy warnings") {
    Workload w;
    w.horizon = 100;
    TaskSpec t;
    t.id = 3;
    t.priority = 0;
    t.arrivals = PeriodicArrivals{10, 0, 0};
    t.body = {{SegmentKind::Compute, 1}};
    t.relative_deadline = 10;
    w.tasks = {t};

    SUBCASE("zero execute is an error") {
        SlowdownConfig config{{0, 3}};
        CHECK_FALSE(validate_config(config, &w).ok());
    }
    SUBCASE("overhead outside 10-90% warns but passes") {
        ValidationReport low = validate_config(SlowdownConfig{{1, 19}}, &w);
        CHECK(low.ok());
        CHECK(low.warnings.size() == 1);
        ValidationReport high = validate_config(SlowdownConfig{{19, 1}}, &w);
        CHECK(high.ok());
        CHECK(high.warnings.size() == 1);
        CHECK(validate_config(SlowdownConfig{{9, 1}}, &w).warnings.empty());
        CHECK(validate_config(SlowdownConfig{{1, 9}}, &w).warnings.empty());
    }
    SUBCASE("per-task keys must reference tasks") {
        SlowdownConfig config{{1, 3}};
        PerTaskSchedule sched;
        sched.params[3] = {1, 1};
        config.schedule = sched;
        CHECK(validate_config(config, &w).ok());
        sched.params[4] = {1, 1};
        config.schedule = sched;
        CHECK_FALSE(validate_config(config, &w).ok());
    }
    SUBCASE("intervals must be sorted and non-overlapping") {
        SlowdownConfig config{{1, 3}};
        config.schedule = PerIntervalSchedule{
            {{0, 500, {1, 3}}, {400, 900, {1, 1}}}};
        CHECK_FALSE(validate_config(config, &w).ok());
    }
    SUBCASE("interval shorter than 50 cycles warns") {
        SlowdownConfig config{{1, 3}};
        config.schedule = PerIntervalSchedule{{{0, 100, {1, 3}}}};
        ValidationReport r = validate_config(config, &w);
        CHECK(r.ok());
        CHECK(r.warnings.size() == 1);
        config.schedule = PerIntervalSchedule{{{0, 200, {1, 3}}}};
        CHECK(validate_config(config, &w).warnings.empty());
    }
}

namespace {

Workload single(TaskId id, Tick release, Tick compute, Tick deadline,
                Tick horizon) {
    TaskSpec t;
    t.id = id;
    t.priority = 0;
    t.arrivals = TraceArrivals{{release}};
    t.body = {{SegmentKind::Compute, compute}};
    t.relative_deadline = deadline;
    Workload w;
    w.tasks = {t};
    w.horizon = horizon;
    return w;
}

}  // namespace

TEST_CASE("distortion: jobs spanning 10 cycles are covered") {
    // period 200, compute 120 at 25% overhead -> span 160 = 40 cycles
    TaskSpec t;
    t.id = 0;
    t.priority = 0;
    t.arrivals = PeriodicArrivals{200, 0, 0};
    t.body = {{SegmentKind::Compute, 120}};
    t.relative_deadline = 200;
    Workload w;
    w.tasks = {t};
    w.horizon = 2000;

    SlowdownConfig config{{1, 3}};
    Trace tr = simulate(w, Slowdown{config});
    DistortionReport report = distortion_metrics(tr, config, 400);
    CHECK(report.finished_jobs == 10);
    CHECK(report.coverage10 == 1.0);
    CHECK(report.escaped == 0.0);
}

TEST_CASE("distortion: short activations escape the routine entirely") {
    // Released at tick 1, the 2-tick job fits inside the first sleep
    // (ticks 1-3) and completes before the tick-4 burst.
    Workload w = single(0, 1, 2, 10, 16);
    SlowdownConfig config{{1, 3}};
    Trace tr = simulate(w, Slowdown{config});
    REQUIRE(tr.jobs.size() == 1);
    REQUIRE(tr.jobs[0].completion.has_value());
    CHECK(*tr.jobs[0].completion == 3);
    CHECK(tr.jobs[0].absorbed_routine_ticks == 0);

    DistortionReport report = distortion_metrics(tr, config, 4);
    CHECK(report.escaped == 1.0);
}

TEST_CASE("distortion: constant ratio tracks within 0.01 over 400-tick windows") {
    // Saturated workload so the routine never competes with idle time.
    TaskSpec t;
    t.id = 0;
    t.priority = 0;
    t.arrivals = PeriodicArrivals{100, 0, 0};
    t.body = {{SegmentKind::Compute, 90}};
    t.relative_deadline = 100;
    Workload w;
    w.tasks = {t};
    w.horizon = 4000;

    SlowdownConfig config{{1, 3}};
    Trace tr = simulate(w, Slowdown{config});
    DistortionReport report = distortion_metrics(tr, config, 400);
    CHECK(report.windows_measured == 10);
    CHECK(report.variation <= 0.01);
}

TEST_CASE("distortion metrics stay in [0, 1] on random workloads") {
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
        Workload w = testing::random_workload(seed, 4, 1500, true);
        SlowdownConfig config{{2, 3}};
        Trace tr = simulate(w, Slowdown{config});
        DistortionReport r = distortion_metrics(tr, config, 50);
        for (double v : {r.coverage10, r.escaped, r.variation}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("distortion rejects wrong-mode traces and tiny windows") {
    Workload w = single(0, 0, 4, 10, 20);
    SlowdownConfig config{{1, 3}};
    Trace base = simulate(w, Baseline{});
    CHECK_THROWS_AS(distortion_metrics(base, config, 400),
                    std::invalid_argument);
    Trace slow = simulate(w, Slowdown{config});
    CHECK_THROWS_AS(distortion_metrics(slow, config, 3), std::invalid_argument);
}

TEST_CASE("constant-schedule routine share is exact over whole cycles") {
    Workload w;
    w.horizon = 500;  // 100 cycles of (2,3)
    Trace tr = simulate(w, Slowdown{SlowdownConfig{{2, 3}}});
    CHECK(tr.routine_ticks() == 200);
}
