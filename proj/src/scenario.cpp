#include "freqsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "workload_json.hpp"

namespace freqsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SemanticError(msg); }

Tick tick_field(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key)) fail(ctx + ": missing field '" + key + "'");
    if (!obj.at(key).is_number_integer())
        fail(ctx + ": field '" + key + "' must be an integer");
    return obj.at(key).get<Tick>();
}

double number_field(const json& obj, const char* key, double fallback,
                    const std::string& ctx) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        fail(ctx + ": field '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

BurstParams parse_bursts(const json& obj, const std::string& ctx) {
    return {tick_field(obj, "execute", ctx), tick_field(obj, "sleep", ctx)};
}

SlowdownConfig parse_slowdown(const json& obj) {
    if (!obj.is_object()) fail("slowdown: must be an object");
    SlowdownConfig config;
    config.default_params = parse_bursts(obj, "slowdown");
    if (!obj.contains("schedule")) return config;

    const json& sched = obj.at("schedule");
    if (!sched.is_object() || sched.size() != 1)
        fail("slowdown: 'schedule' must be a one-key tagged object "
             "(constant | per_task | per_interval)");
    const auto it = sched.begin();
    const std::string& tag = it.key();
    const json& body = it.value();
    if (tag == "constant") {
        config.schedule = ConstantSchedule{};
    } else if (tag == "per_task") {
        if (!body.is_object())
            fail("slowdown: per_task schedule must map task ids to bursts");
        PerTaskSchedule per_task;
        for (const auto& [key, bursts] : body.items()) {
            TaskId id;
            try {
                id = static_cast<TaskId>(std::stol(key));
            } catch (const std::exception&) {
                fail("slowdown: per_task key '" + key + "' is not a task id");
            }
            per_task.params[id] = parse_bursts(bursts, "per_task " + key);
        }
        config.schedule = std::move(per_task);
    } else if (tag == "per_interval") {
        if (!body.is_array())
            fail("slowdown: per_interval schedule must be an array");
        PerIntervalSchedule per_interval;
        for (const json& entry : body) {
            ScheduleInterval iv;
            iv.start = tick_field(entry, "start", "per_interval");
            iv.end = tick_field(entry, "end", "per_interval");
            iv.params = parse_bursts(entry, "per_interval");
            per_interval.intervals.push_back(iv);
        }
        config.schedule = std::move(per_interval);
    } else {
        fail("slowdown: unknown schedule kind '" + tag + "'");
    }
    return config;
}

EnergyParams parse_energy(const json& obj) {
    if (!obj.is_object()) fail("energy: must be an object");
    EnergyParams params;
    params.c = number_field(obj, "c", 1.0, "energy");
    params.cap = number_field(obj, "cap", 1.0, "energy");
    if (obj.contains("voltage_table")) {
        if (!obj.at("voltage_table").is_array())
            fail("energy: 'voltage_table' must be an array");
        for (const json& entry : obj.at("voltage_table")) {
            VoltagePoint point;
            point.phi = number_field(entry, "phi", -1.0, "voltage_table");
            point.voltage = number_field(entry, "voltage", -1.0, "voltage_table");
            if (point.phi < 0.0 || point.voltage < 0.0)
                fail("energy: voltage_table entries need non-negative "
                     "'phi' and 'voltage'");
            params.voltage_table.push_back(point);
        }
        for (std::size_t i = 1; i < params.voltage_table.size(); ++i)
            if (params.voltage_table[i].phi < params.voltage_table[i - 1].phi ||
                params.voltage_table[i].voltage <
                    params.voltage_table[i - 1].voltage)
                fail("energy: voltage_table must be sorted and non-decreasing");
    }
    return params;
}

json slowdown_to_json(const SlowdownConfig& config) {
    json out = {{"execute", config.default_params.execute},
                {"sleep", config.default_params.sleep}};
    if (const auto* per_task = std::get_if<PerTaskSchedule>(&config.schedule)) {
        json map = json::object();
        for (const auto& [id, params] : per_task->params)
            map[std::to_string(id)] = {{"execute", params.execute},
                                       {"sleep", params.sleep}};
        out["schedule"] = {{"per_task", map}};
    } else if (const auto* per_interval =
                   std::get_if<PerIntervalSchedule>(&config.schedule)) {
        json arr = json::array();
        for (const ScheduleInterval& iv : per_interval->intervals)
            arr.push_back({{"start", iv.start},
                           {"end", iv.end},
                           {"execute", iv.params.execute},
                           {"sleep", iv.params.sleep}});
        out["schedule"] = {{"per_interval", arr}};
    } else {
        out["schedule"] = {{"constant", json::object()}};
    }
    return out;
}

json energy_to_json(const EnergyParams& params) {
    json out = {{"c", params.c}, {"cap", params.cap}};
    if (!params.voltage_table.empty()) {
        json table = json::array();
        for (const VoltagePoint& point : params.voltage_table)
            table.push_back({{"phi", point.phi}, {"voltage", point.voltage}});
        out["voltage_table"] = table;
    }
    return out;
}

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

std::pair<Scenario, ValidationReport> inspect_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at " + position_of(text, e.byte) + ": " +
                         e.what());
    }
    Scenario scenario;
    scenario.workload = workload_from_json(doc);
    if (doc.contains("slowdown"))
        scenario.slowdown = parse_slowdown(doc.at("slowdown"));
    if (doc.contains("energy")) scenario.energy = parse_energy(doc.at("energy"));
    if (doc.contains("repeats")) {
        if (!doc.at("repeats").is_number_integer() ||
            doc.at("repeats").get<int>() < 1)
            fail("scenario: 'repeats' must be a positive integer");
        scenario.repeats = doc.at("repeats").get<int>();
    }

    ValidationReport report = validate(scenario.workload);
    if (scenario.slowdown) {
        ValidationReport sd =
            validate_config(*scenario.slowdown, &scenario.workload);
        report.errors.insert(report.errors.end(), sd.errors.begin(),
                             sd.errors.end());
        report.warnings.insert(report.warnings.end(), sd.warnings.begin(),
                               sd.warnings.end());
    }
    return {std::move(scenario), std::move(report)};
}

Scenario parse_scenario(const std::string& text) {
    auto [scenario, report] = inspect_scenario(text);
    if (!report.ok()) fail(report.errors.front());
    return scenario;
}

Scenario load_scenario_file(const std::string& path,
                            const ScenarioOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();

    Scenario scenario = parse_scenario(buffer.str());
    if (overrides.horizon) scenario.workload.horizon = *overrides.horizon;
    if (overrides.seed) scenario.workload.seed = *overrides.seed;
    if (overrides.repeats) {
        if (*overrides.repeats < 1)
            fail("scenario: 'repeats' must be a positive integer");
        scenario.repeats = *overrides.repeats;
    }
    if (overrides.horizon || overrides.seed) {
        ValidationReport report = validate(scenario.workload);
        if (!report.ok()) fail(report.errors.front());
    }
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    json doc = workload_to_json(scenario.workload);
    if (scenario.slowdown) doc["slowdown"] = slowdown_to_json(*scenario.slowdown);
    if (scenario.energy) doc["energy"] = energy_to_json(*scenario.energy);
    if (scenario.repeats != 1) doc["repeats"] = scenario.repeats;
    return doc.dump(2) + "\n";
}

}  // namespace freqsim
