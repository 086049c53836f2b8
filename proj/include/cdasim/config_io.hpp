#pragma once
#include <string>
#include <string_view>

#include "cdasim/config.hpp"

namespace cdasim {

// Parses the JSON experiment description (sections: market, fundamental, agents,
// output). Every omitted key takes its documented default; unknown keys, wrong types
// and violated constraints throw ConfigError naming the key.
SimConfig parse_config(std::string_view text);

// Fully resolved config, every default spelled out. parse_config(config_to_json(c)) == c.
std::string config_to_json(const SimConfig& config, int indent = 2);

// Applies `dotted.path=value` to a JSON config text and returns the new text. The value
// is read as JSON when it parses, otherwise as a string. Array elements are addressed
// by index, e.g. `agents.0.count=10`.
std::string apply_override(std::string_view config_text, std::string_view assignment);

} // namespace cdasim
