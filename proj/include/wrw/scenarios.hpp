#pragma once

#include <string>
#include <vector>

namespace wrw::scenarios {

struct Check {
    std::string label;
    bool passed = false;
    std::string detail;
};

struct ScenarioResult {
    std::string name;
    std::string title;
    bool passed = false;
    std::vector<Check> checks;
    double seconds = 0.0;
};

const std::vector<std::string>& scenario_names();

/// Runs one named scenario; throws std::invalid_argument for unknown names.
ScenarioResult run_scenario(const std::string& name);

}  // namespace wrw::scenarios
