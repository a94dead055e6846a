#pragma once

#include <json.hpp>

#include "freqsim/analysis.hpp"
#include "freqsim/search.hpp"
#include "freqsim/simcore.hpp"
#include "freqsim/slowdown.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

inline constexpr int kReportSchemaVersion = 1;

// All reports share one envelope: schema_version, kind, fingerprint and a
// meta block. Everything outside `meta` is a deterministic function of
// the inputs; `meta` (timestamp, tool version) is excluded from
// byte-identity comparisons.
nlohmann::json report_envelope(const std::string& kind,
                               const WorkloadFingerprint& fp);

// include_attribution additionally emits the per-tick attribution as a
// run-length-encoded [value, count] array (large; flag-gated).
nlohmann::json trace_report(const Trace& trace, bool include_attribution);
nlohmann::json search_report(const SearchResult& result,
                             const WorkloadFingerprint& fp);
nlohmann::json comparison_report(const ComparisonReport& report,
                                 const WorkloadFingerprint& fp);
nlohmann::json distortion_report(const DistortionReport& report,
                                 const SlowdownConfig& config,
                                 const WorkloadFingerprint& fp);
nlohmann::json validation_report(const ValidationReport& report,
                                 const WorkloadFingerprint& fp);
nlohmann::json energy_report(const EnergyMetrics& metrics, double phi);

std::vector<std::pair<std::int32_t, Tick>> rle_encode(
    const std::vector<std::int32_t>& attribution);
std::vector<std::int32_t> rle_decode(
    const std::vector<std::pair<std::int32_t, Tick>>& runs);

}  // namespace freqsim
