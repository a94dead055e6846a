#pragma once

#include <map>
#include <optional>
#include <vector>

#include "freqsim/search.hpp"
#include "freqsim/simcore.hpp"
#include "freqsim/slowdown.hpp"
#include "freqsim/types.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

// ---------------------------------------------------------------------------
// Energy model: P = c * cap * V(phi)^2 * phi, E = P * busy_time.

struct VoltagePoint {
    double phi = 1.0;
    double voltage = 1.0;
};

struct EnergyParams {
    double c = 1.0;
    double cap = 1.0;
    // Empty: proportional model V(phi) = phi. Otherwise piecewise-linear
    // interpolation through the points; must be non-decreasing in phi.
    std::vector<VoltagePoint> voltage_table;

    double voltage_of(double phi) const;
};

struct EnergyMetrics {
    double power = 0.0;
    double energy = 0.0;
    // (V(1)/V(phi))^2; assumes execution stretches proportionally, and is
    // invariant to c and cap.
    double energy_ratio_vs_nominal = 0.0;
    Tick busy_ticks = 0;  // non-idle ticks; idle/sleep power is not modeled
};

EnergyMetrics energy_metrics(const Trace& trace, double phi,
                             const EnergyParams& params);

// ---------------------------------------------------------------------------
// Rate-monotonic utilization comparator

enum class RmVerdict { Schedulable, Inconclusive, NotApplicable };

struct RmCheck {
    RmVerdict verdict = RmVerdict::NotApplicable;
    double utilization = 0.0;        // sum C_i / (phi * T_i)
    double utilization_ceiled = 0.0; // sum ceil(C_i/phi) / T_i, what the
                                     // discrete simulator actually serves
    double bound = 0.0;              // n (2^{1/n} - 1)
    std::string reason;              // why NotApplicable, when it is
};

// Applicable only to wait-free, zero-jitter periodic sets with deadline ==
// period and priorities in rate-monotonic order. The bound is sufficient,
// never necessary, hence Inconclusive rather than Unschedulable.
RmCheck rm_utilization_check(const Workload& workload, double phi);

// lcm of the periods; nullopt if any task is not periodic or on overflow.
std::optional<Tick> hyperperiod(const Workload& workload);

// ---------------------------------------------------------------------------
// Cross-mode comparison

struct GridRow {
    double phi = 0.0;
    bool true_schedulable = false;
    std::int64_t true_misses = 0;
    bool slowdown_schedulable = false;
    std::int64_t slowdown_misses = 0;
    BurstParams slowdown_params;
    DistortionReport distortion;
    bool diverges = false;
};

struct ComparisonReport {
    std::vector<GridRow> rows;             // sorted by phi ascending
    std::vector<double> divergences;       // phi values where verdicts differ
    SearchResult search_true;
    SearchResult search_slowdown;
    double min_phi_naive = 0.0;
};

// Runs both mode families at every grid point plus both searches; flags
// every phi where the slowdown verdict differs from true scaling, with
// distortion metrics attached so divergence can be correlated with
// coverage10 / escape. Grid rows run the routine at the coarsest burst
// granularity fitting max_cycle (that is what the comparison is probing);
// the embedded searches use the finest, where approximation error is
// smallest.
ComparisonReport compare_modes(const Workload& workload,
                               const std::vector<double>& grid, Tick max_cycle,
                               double tolerance);

}  // namespace freqsim
