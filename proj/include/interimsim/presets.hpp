#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interimsim/scenario_file.hpp"

namespace interimsim {

struct PresetEntry {
    const char* name;
    const char* text;
};

/* Scenario documents shipped with the library, sorted by name. */
const std::vector<PresetEntry>& preset_catalog();

std::optional<std::string_view> preset_text(std::string_view name);

/* A preset name or a path to a scenario file. */
ScenarioFile load_scenario(const std::string& name_or_path);

}  // namespace interimsim
