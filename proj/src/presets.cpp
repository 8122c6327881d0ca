#include "interimsim/presets.hpp"

#include <filesystem>
#include <stdexcept>

namespace interimsim {

std::optional<std::string_view> preset_text(std::string_view name) {
    for (const auto& p : preset_catalog())
        if (name == p.name) return std::string_view(p.text);
    return std::nullopt;
}

ScenarioFile load_scenario(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
    if (const auto text = preset_text(name_or_path)) {
        try {
            return parse_scenario(*text);
        } catch (const ParseError& e) {
            throw std::runtime_error("preset " + name_or_path + ": " + e.what());
        }
    }
    throw std::runtime_error("'" + name_or_path + "' is neither a scenario file nor a preset name");
}

}  // namespace interimsim
