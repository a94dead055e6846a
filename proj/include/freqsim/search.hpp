#pragma once

#include <optional>
#include <vector>

#include "freqsim/simcore.hpp"
#include "freqsim/types.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

enum class SearchFamily { TrueScaling, SlowdownApprox };

struct Probe {
    double phi = 0.0;
    bool schedulable = false;
    std::int64_t miss_count = 0;
};

struct SearchResult {
    std::optional<double> min_phi;  // absent: unschedulable within range
    std::vector<Probe> probes;      // in probe order, phi = 1 check first
    double tolerance = 0.0;
    SearchFamily family = SearchFamily::TrueScaling;
    double warm_start_phi = 0.0;
    // The bracket logic presumes schedulability monotone in phi; with
    // hard waits that is an assumption, not a theorem.
    bool monotonicity_assumed = false;
    int repeats = 1;

    bool unschedulable() const { return !min_phi.has_value(); }
};

struct SearchOptions {
    double tolerance = 0.01;
    std::optional<double> start;    // warm-start probe; default naive estimate
    Tick max_cycle = 16;            // SlowdownApprox: params_for_target budget
    int repeats = 1;                // stochastic verdicts: all seeds must pass
};

// True iff zero jobs missed (inconclusive horizon-truncated jobs excluded).
bool is_schedulable(const Trace& trace);

// Baseline utilization clamped to [kPhiFloor, 1]. An estimate only: it
// ignores deadlines entirely, which is exactly the gap this toolkit
// exists to expose.
double naive_estimate(const Workload& workload);

// Bisection over the frequency fraction on the pass/fail outcome of a
// full simulation, bracket within [kPhiFloor, 1]. Verifies phi = 1 first;
// min_phi is the schedulable upper end of the final bracket.
SearchResult min_frequency_search(const Workload& workload, SearchFamily family,
                                  const SearchOptions& options);

}  // namespace freqsim
