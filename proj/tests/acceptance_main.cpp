// Acceptance suite: runs every reproduce scenario (one per acceptance
// criterion) and prints one PASS/FAIL line per check.

#include <cstdio>
#include <string>
#include <vector>

#include "wrw/scenarios.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> names;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) names.emplace_back(argv[i]);
    } else {
        names = wrw::scenarios::scenario_names();
    }

    int failures = 0;
    for (const auto& name : names) {
        const auto result = wrw::scenarios::run_scenario(name);
        std::printf("== %s (%s)\n", result.title.c_str(), result.name.c_str());
        for (const auto& check : result.checks) {
            std::printf("  [%s] %s: %s\n", check.passed ? "PASS" : "FAIL", check.label.c_str(),
                        check.detail.c_str());
            if (!check.passed) ++failures;
        }
        std::printf("  -> %s in %.2f s\n", result.passed ? "PASS" : "FAIL", result.seconds);
    }
    if (failures) std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
