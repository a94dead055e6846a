#pragma once

#include <cstdint>

#include "freqsim/types.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

struct GenOptions {
    int tasks = 3;
    double target_utilization = 0.5;
    std::uint64_t seed = 1;
    Tick horizon = 0;        // 0: twice the hyperperiod
    Tick period_min = 10;
    Tick period_max = 1000;
};

// Synthetic periodic workload: utilizations split UUniFast-style across n
// tasks, periods log-uniform in [period_min, period_max], rate-monotonic
// priorities, deadline == period. Compute costs are rounded to >= 1 tick,
// so the realized utilization can drift from the target; callers read it
// back via nominal_utilization().
Workload generate_random_workload(const GenOptions& options);

}  // namespace freqsim
