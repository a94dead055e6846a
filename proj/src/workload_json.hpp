#pragma once

#include <json.hpp>

#include "freqsim/workload.hpp"

namespace freqsim {

// Internal: shared between workload.cpp and scenario.cpp.
Workload workload_from_json(const nlohmann::json& doc);
nlohmann::json workload_to_json(const Workload& w);

}  // namespace freqsim
