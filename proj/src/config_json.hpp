#pragma once
#include "cdasim/config.hpp"
#include "json.hpp"

namespace cdasim::detail {

nlohmann::ordered_json to_json_value(const SimConfig& config);

} // namespace cdasim::detail
