#pragma once

#include <string>
#include <vector>

namespace dirtsch {

struct ScenarioOutcome {
    std::string name;
    bool pass = false;
    std::vector<std::string> lines;  // human-readable checks, one per assertion
};

std::vector<std::string> scenarioNames();

// Runs one built-in scenario and checks its pinned expectation.
// Throws LookupError for unknown names.
ScenarioOutcome runScenario(const std::string& name);

// Expected event trace of the `walkthrough` scenario (directional mode).
const std::vector<std::string>& walkthroughGoldenTrace();

}  // namespace dirtsch
