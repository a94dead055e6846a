#include "freqsim/workload.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "freqsim/rng.hpp"
#include "workload_json.hpp"

namespace freqsim {

using nlohmann::json;

Tick TaskSpec::total_compute() const {
    Tick sum = 0;
    for (const Segment& seg : body)
        if (seg.kind == SegmentKind::Compute) sum += seg.length;
    return sum;
}

bool TaskSpec::has_wait() const {
    return std::any_of(body.begin(), body.end(), [](const Segment& s) {
        return s.kind == SegmentKind::HardWait;
    });
}

const TaskSpec* Workload::find_task(TaskId id) const {
    for (const TaskSpec& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

bool Workload::has_wait() const {
    return std::any_of(tasks.begin(), tasks.end(),
                       [](const TaskSpec& t) { return t.has_wait(); });
}

// ---------------------------------------------------------------------------
// Arrival generation

std::vector<Tick> generate_arrivals(const TaskSpec& task, Tick horizon,
                                    std::uint64_t seed) {
    std::vector<Tick> out;
    SplitMix64 rng = task_stream(seed, task.id);

    if (const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals)) {
        for (Tick k = 0; p->phase + k * p->period < horizon; ++k) {
            Tick j = p->jitter > 0
                         ? static_cast<Tick>(rng.below(
                               static_cast<std::uint64_t>(p->jitter) + 1))
                         : 0;
            Tick r = p->phase + k * p->period + j;
            if (r >= horizon) break;  // later bases only grow
            out.push_back(r);
        }
    } else if (const auto* p = std::get_if<PoissonArrivals>(&task.arrivals)) {
        Tick t = 0;
        for (;;) {
            double u = rng.unit_open_closed();
            Tick gap = p->min_gap +
                       static_cast<Tick>(std::floor(
                           static_cast<double>(p->mean_gap - p->min_gap) *
                           -std::log(u)));
            t += gap;
            if (t >= horizon) break;
            out.push_back(t);
        }
    } else {
        const auto& tr = std::get<TraceArrivals>(task.arrivals);
        for (Tick r : tr.releases) {
            if (r >= horizon) break;
            out.push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_task(const TaskSpec& task, std::vector<std::string>& errors) {
    const std::string where = "task " + std::to_string(task.id) + ": ";
    if (task.relative_deadline < 1)
        errors.push_back(where + "deadline must be >= 1");
    if (task.body.empty()) {
        errors.push_back(where + "body non-empty");
    } else {
        bool any_compute = false;
        for (const Segment& seg : task.body) {
            if (seg.length < 1)
                errors.push_back(where + "segment length must be >= 1");
            any_compute |= seg.kind == SegmentKind::Compute;
        }
        if (!any_compute)
            errors.push_back(where + "body needs at least one compute segment");
    }

    if (const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals)) {
        if (p->period < 1) errors.push_back(where + "zero period");
        if (p->phase < 0) errors.push_back(where + "negative phase");
        if (p->jitter < 0) errors.push_back(where + "negative jitter");
        if (p->period >= 1 && p->jitter >= p->period)
            errors.push_back(where + "jitter must be < period");
    } else if (const auto* p = std::get_if<PoissonArrivals>(&task.arrivals)) {
        if (p->min_gap < 1) errors.push_back(where + "min_gap must be >= 1");
        if (p->mean_gap < 1) errors.push_back(where + "mean_gap must be >= 1");
        if (p->min_gap > p->mean_gap)
            errors.push_back(where + "min_gap must be <= mean_gap");
    } else {
        const auto& tr = std::get<TraceArrivals>(task.arrivals);
        for (std::size_t i = 0; i < tr.releases.size(); ++i) {
            if (tr.releases[i] < 0) {
                errors.push_back(where + "negative release time");
                break;
            }
            if (i > 0 && tr.releases[i] <= tr.releases[i - 1]) {
                errors.push_back(where + "releases must be strictly increasing");
                break;
            }
        }
    }
}

}  // namespace

double nominal_utilization(const Workload& workload) {
    double u = 0.0;
    for (const TaskSpec& task : workload.tasks)
        if (const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals))
            if (p->period >= 1)
                u += static_cast<double>(task.total_compute()) /
                     static_cast<double>(p->period);
    return u;
}

ValidationReport validate(const Workload& workload) {
    ValidationReport report;
    if (workload.horizon < 1)
        report.errors.push_back("horizon must be >= 1");

    std::set<TaskId> ids;
    std::set<int> priorities;
    for (const TaskSpec& task : workload.tasks) {
        if (!ids.insert(task.id).second)
            report.errors.push_back("duplicate id " + std::to_string(task.id));
        if (!priorities.insert(task.priority).second)
            report.errors.push_back("duplicate priority " +
                                    std::to_string(task.priority));
        validate_task(task, report.errors);
    }

    report.nominal_utilization = nominal_utilization(workload);
    if (report.nominal_utilization > 1.0) {
        std::ostringstream os;
        os << "utilization " << report.nominal_utilization << " exceeds 1";
        report.warnings.push_back(os.str());
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void fail_semantic(const std::string& msg) {
    throw SemanticError(msg);
}

Tick require_tick(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key))
        fail_semantic(ctx + ": missing field '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail_semantic(ctx + ": field '" + key + "' must be an integer");
    return v.get<Tick>();
}

Tick optional_tick(const json& obj, const char* key, Tick fallback,
                   const std::string& ctx) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail_semantic(ctx + ": field '" + key + "' must be an integer");
    return v.get<Tick>();
}

ArrivalModel parse_arrivals(const json& obj, const std::string& ctx) {
    if (!obj.is_object() || obj.size() != 1)
        fail_semantic(ctx + ": 'arrivals' must be a one-key tagged object "
                            "(periodic | poisson | trace)");
    const auto it = obj.begin();
    const std::string& tag = it.key();
    const json& body = it.value();
    if (tag == "periodic") {
        PeriodicArrivals p;
        p.period = require_tick(body, "period", ctx);
        p.phase = optional_tick(body, "phase", 0, ctx);
        p.jitter = optional_tick(body, "jitter", 0, ctx);
        return p;
    }
    if (tag == "poisson") {
        PoissonArrivals p;
        p.mean_gap = require_tick(body, "mean_gap", ctx);
        p.min_gap = optional_tick(body, "min_gap", 1, ctx);
        return p;
    }
    if (tag == "trace") {
        if (!body.contains("releases") || !body.at("releases").is_array())
            fail_semantic(ctx + ": trace arrivals need a 'releases' array");
        TraceArrivals t;
        for (const json& r : body.at("releases")) {
            if (!r.is_number_integer())
                fail_semantic(ctx + ": release times must be integers");
            t.releases.push_back(r.get<Tick>());
        }
        return t;
    }
    fail_semantic(ctx + ": unknown arrival model '" + tag + "'");
}

std::vector<Segment> parse_body(const json& arr, const std::string& ctx) {
    if (!arr.is_array())
        fail_semantic(ctx + ": 'body' must be an array");
    std::vector<Segment> body;
    for (const json& seg : arr) {
        if (!seg.is_object() || seg.size() != 1)
            fail_semantic(ctx + ": body entries are single-key objects "
                                "({\"compute\": n} | {\"wait\": n})");
        const auto it = seg.begin();
        const std::string& tag = it.key();
        const json& len = it.value();
        if (!len.is_number_integer())
            fail_semantic(ctx + ": segment length must be an integer");
        if (tag == "compute")
            body.push_back({SegmentKind::Compute, len.get<Tick>()});
        else if (tag == "wait")
            body.push_back({SegmentKind::HardWait, len.get<Tick>()});
        else
            fail_semantic(ctx + ": unknown segment kind '" + tag + "'");
    }
    return body;
}

// Line/column for a byte offset, for parse diagnostics.
std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Workload workload_from_json(const json& doc) {
    if (!doc.is_object())
        fail_semantic("workload document must be a JSON object");
    Workload w;
    w.horizon = require_tick(doc, "horizon", "workload");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() &&
            !doc.at("seed").is_number_integer())
            fail_semantic("workload: 'seed' must be an unsigned integer");
        w.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (!doc.contains("tasks") || !doc.at("tasks").is_array())
        fail_semantic("workload: missing 'tasks' array");

    static const std::set<std::string> task_keys = {"id", "priority", "deadline",
                                                    "arrivals", "body"};
    for (const json& t : doc.at("tasks")) {
        if (!t.is_object()) fail_semantic("task entries must be objects");
        TaskSpec task;
        task.id = static_cast<TaskId>(require_tick(t, "id", "task"));
        const std::string ctx = "task " + std::to_string(task.id);
        for (const auto& [key, _] : t.items())
            if (!task_keys.count(key))
                fail_semantic(ctx + ": unknown field '" + key + "'");
        task.priority = static_cast<int>(require_tick(t, "priority", ctx));
        task.relative_deadline = require_tick(t, "deadline", ctx);
        if (!t.contains("arrivals"))
            fail_semantic(ctx + ": missing field 'arrivals'");
        task.arrivals = parse_arrivals(t.at("arrivals"), ctx);
        if (!t.contains("body")) fail_semantic(ctx + ": missing field 'body'");
        task.body = parse_body(t.at("body"), ctx);
        w.tasks.push_back(std::move(task));
    }
    return w;
}

json workload_to_json(const Workload& w) {
    json tasks = json::array();
    for (const TaskSpec& task : w.tasks) {
        json arrivals;
        if (const auto* p = std::get_if<PeriodicArrivals>(&task.arrivals)) {
            arrivals = {{"periodic",
                         {{"period", p->period},
                          {"phase", p->phase},
                          {"jitter", p->jitter}}}};
        } else if (const auto* p = std::get_if<PoissonArrivals>(&task.arrivals)) {
            arrivals = {{"poisson",
                         {{"mean_gap", p->mean_gap}, {"min_gap", p->min_gap}}}};
        } else {
            arrivals = {
                {"trace",
                 {{"releases", std::get<TraceArrivals>(task.arrivals).releases}}}};
        }
        json body = json::array();
        for (const Segment& seg : task.body)
            body.push_back(seg.kind == SegmentKind::Compute
                               ? json{{"compute", seg.length}}
                               : json{{"wait", seg.length}});
        tasks.push_back({{"id", task.id},
                         {"priority", task.priority},
                         {"deadline", task.relative_deadline},
                         {"arrivals", arrivals},
                         {"body", body}});
    }
    return {{"tasks", tasks}, {"horizon", w.horizon}, {"seed", w.seed}};
}

Workload parse_workload(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at " + position_of(text, e.byte) + ": " +
                         e.what());
    }
    Workload w = workload_from_json(doc);
    ValidationReport report = validate(w);
    if (!report.ok()) fail_semantic(report.errors.front());
    return w;
}

std::string serialize_workload(const Workload& workload) {
    return workload_to_json(workload).dump(2) + "\n";
}

WorkloadFingerprint fingerprint(const Workload& workload) {
    const std::string canonical = workload_to_json(workload).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return {workload.seed, h};
}

}  // namespace freqsim
