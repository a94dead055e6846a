#include "freqsim/report.hpp"

#include <ctime>
#include <iomanip>
#include <sstream>

namespace freqsim {

using nlohmann::json;

namespace {

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << v;
    return out.str();
}

json fingerprint_json(const WorkloadFingerprint& fp) {
    return {{"seed", fp.seed}, {"hash", hex64(fp.hash)}};
}

json probe_json(const Probe& probe) {
    return {{"phi", probe.phi},
            {"schedulable", probe.schedulable},
            {"misses", probe.miss_count}};
}

json search_body(const SearchResult& result) {
    json probes = json::array();
    for (const Probe& p : result.probes) probes.push_back(probe_json(p));
    return {{"family", result.family == SearchFamily::TrueScaling
                           ? "true"
                           : "slowdown"},
            {"min_phi", result.min_phi ? json(*result.min_phi) : json(nullptr)},
            {"unschedulable", result.unschedulable()},
            {"tolerance", result.tolerance},
            {"warm_start_phi", result.warm_start_phi},
            {"monotonicity_assumed", result.monotonicity_assumed},
            {"repeats", result.repeats},
            {"probes", probes}};
}

json distortion_body(const DistortionReport& report) {
    return {{"coverage10", report.coverage10},
            {"escaped", report.escaped},
            {"variation", report.variation},
            {"window", report.window},
            {"finished_jobs", report.finished_jobs},
            {"windows_measured", report.windows_measured}};
}

}  // namespace

json report_envelope(const std::string& kind, const WorkloadFingerprint& fp) {
    return {{"schema_version", kReportSchemaVersion},
            {"kind", kind},
            {"fingerprint", fingerprint_json(fp)},
            {"meta",
             {{"tool", "freqsim"},
              {"version", kToolVersion},
              {"generated_at", utc_now()}}}};
}

json trace_report(const Trace& trace, bool include_attribution) {
    json doc = report_envelope("trace", trace.fingerprint);
    doc["mode"] = mode_name(trace.mode);
    doc["horizon"] = trace.horizon;
    doc["counts"] = {{"task_ticks", trace.task_ticks()},
                     {"routine_ticks", trace.routine_ticks()},
                     {"idle_ticks", trace.idle_ticks()},
                     {"missed", trace.missed_count()},
                     {"inconclusive", trace.inconclusive_count()},
                     {"cycles", static_cast<std::int64_t>(trace.cycles.size())}};
    doc["utilization"] = measure_utilization(trace);

    json jobs = json::array();
    for (const JobRecord& job : trace.jobs) {
        jobs.push_back(
            {{"task", job.task_id},
             {"job", job.job_index},
             {"release", job.release},
             {"completion",
              job.completion ? json(*job.completion) : json(nullptr)},
             {"deadline", job.absolute_deadline},
             {"missed", job.missed},
             {"inconclusive", job.inconclusive},
             {"activations", job.slowdown_activations_during},
             {"busy_ticks", job.busy_ticks},
             {"absorbed_routine_ticks", job.absorbed_routine_ticks},
             {"wait_ticks", job.wait_ticks}});
    }
    doc["jobs"] = jobs;

    if (include_attribution) {
        json runs = json::array();
        for (const auto& [value, count] : rle_encode(trace.attribution))
            runs.push_back({value, count});
        doc["attribution_rle"] = runs;
    }
    return doc;
}

json search_report(const SearchResult& result, const WorkloadFingerprint& fp) {
    json doc = report_envelope("search", fp);
    doc["search"] = search_body(result);
    return doc;
}

json comparison_report(const ComparisonReport& report,
                       const WorkloadFingerprint& fp) {
    json doc = report_envelope("compare", fp);
    json rows = json::array();
    for (const GridRow& row : report.rows) {
        json entry = {{"phi", row.phi},
                      {"true_schedulable", row.true_schedulable},
                      {"true_misses", row.true_misses},
                      {"slowdown_schedulable", row.slowdown_schedulable},
                      {"slowdown_misses", row.slowdown_misses},
                      {"slowdown_params",
                       {{"execute", row.slowdown_params.execute},
                        {"sleep", row.slowdown_params.sleep}}},
                      {"diverges", row.diverges}};
        if (row.phi < 1.0) entry["distortion"] = distortion_body(row.distortion);
        rows.push_back(entry);
    }
    doc["rows"] = rows;
    doc["divergences"] = report.divergences;
    doc["search_true"] = search_body(report.search_true);
    doc["search_slowdown"] = search_body(report.search_slowdown);
    doc["min_phi_naive"] = report.min_phi_naive;
    return doc;
}

json distortion_report(const DistortionReport& report,
                       const SlowdownConfig& config,
                       const WorkloadFingerprint& fp) {
    json doc = report_envelope("distortion", fp);
    doc["distortion"] = distortion_body(report);
    doc["slowdown"] = {{"execute", config.default_params.execute},
                       {"sleep", config.default_params.sleep},
                       {"overhead", overhead_fraction(config.default_params)}};
    return doc;
}

json validation_report(const ValidationReport& report,
                       const WorkloadFingerprint& fp) {
    json doc = report_envelope("validate", fp);
    doc["ok"] = report.ok();
    doc["errors"] = report.errors;
    doc["warnings"] = report.warnings;
    doc["nominal_utilization"] = report.nominal_utilization;
    return doc;
}

json energy_report(const EnergyMetrics& metrics, double phi) {
    return {{"phi", phi},
            {"power", metrics.power},
            {"energy", metrics.energy},
            {"energy_ratio_vs_nominal", metrics.energy_ratio_vs_nominal},
            {"busy_ticks", metrics.busy_ticks}};
}

std::vector<std::pair<std::int32_t, Tick>> rle_encode(
    const std::vector<std::int32_t>& attribution) {
    std::vector<std::pair<std::int32_t, Tick>> runs;
    for (std::int32_t v : attribution) {
        if (!runs.empty() && runs.back().first == v)
            ++runs.back().second;
        else
            runs.emplace_back(v, 1);
    }
    return runs;
}

std::vector<std::int32_t> rle_decode(
    const std::vector<std::pair<std::int32_t, Tick>>& runs) {
    std::vector<std::int32_t> out;
    for (const auto& [value, count] : runs)
        out.insert(out.end(), static_cast<std::size_t>(count), value);
    return out;
}

}  // namespace freqsim
