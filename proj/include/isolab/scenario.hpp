#pragma once

#include "isolab/catalog.hpp"

#include <nlohmann/json.hpp>
#include <filesystem>

namespace isolab {

using json = nlohmann::ordered_json;

struct CheckRecord {
    std::string name;
    std::string verdict;
    std::string expected;
    bool matches_expect = false;
    json details;  // residuals, witnesses, recovered matrices
};

struct Report {
    std::string scenario_id;
    std::uint64_t seed = 0;
    json tolerances;
    std::vector<CheckRecord> checks;
    double wall_time_ms = 0.0;

    bool all_match() const;
    json to_json() const;
};

/// Scenario file <-> in-memory spec. parse throws ParseError with position
/// information; complex numbers travel as [re, im] pairs and structure
/// constants as a flat row-major array of such pairs.
ScenarioSpec parse_scenario(const json& j);
json scenario_to_json(const ScenarioSpec& spec);

/// Executes the requested checks in declared order with the declared seed.
Report run_scenario_spec(const ScenarioSpec& spec);
Report run_scenario(const std::filesystem::path& path);

/// The shipped scenario suite (also serialized under scenarios/).
std::vector<ScenarioSpec> builtin_scenarios();

/// Built-in scenarios plus the module property suites; `seed_mix` perturbs
/// every per-scenario seed.
Report selftest(std::uint64_t seed_mix = 0);

/// Fixed-width human summary.
void print_summary(const Report& report);

} // namespace isolab
