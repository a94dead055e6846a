#pragma once

#include <optional>
#include <string>
#include <utility>

#include "freqsim/analysis.hpp"
#include "freqsim/simcore.hpp"
#include "freqsim/slowdown.hpp"
#include "freqsim/workload.hpp"

namespace freqsim {

// A scenario file is a workload document plus optional `slowdown` and
// `energy` keys; the run options mirror the CLI overrides.
struct Scenario {
    Workload workload;
    std::optional<SlowdownConfig> slowdown;
    std::optional<EnergyParams> energy;
    int repeats = 1;
};

struct ScenarioOverrides {
    std::optional<Tick> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<int> repeats;
};

// Structural problems (bad JSON syntax, missing or ill-typed fields)
// throw ParseError / SemanticError; semantic findings are returned in the
// report (workload and slowdown-config checks merged), not thrown.
std::pair<Scenario, ValidationReport> inspect_scenario(const std::string& text);

// inspect_scenario + throw SemanticError on the first semantic error.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path,
                            const ScenarioOverrides& overrides = {});
std::string serialize_scenario(const Scenario& scenario);

}  // namespace freqsim
