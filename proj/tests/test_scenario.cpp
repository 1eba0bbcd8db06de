#include <doctest.h>

#include <isolab/errors.hpp>
#include <isolab/scenario.hpp>

#include <fstream>

using namespace isolab;

namespace {

ScenarioSpec find_builtin(const std::string& id) {
    for (const auto& spec : builtin_scenarios())
        if (spec.id == id) return spec;
    REQUIRE(false);
    return {};
}

json strip_wall_time(json j) {
    j.erase("wall_time_ms");
    return j;
}

} // namespace

TEST_CASE("scenario specs survive the JSON round trip") {
    for (const auto& spec : builtin_scenarios()) {
        const ScenarioSpec back = parse_scenario(scenario_to_json(spec));
        CHECK(back.id == spec.id);
        CHECK(back.checks == spec.checks);
        CHECK(back.expect == spec.expect);
        CHECK(back.seed == spec.seed);
        CHECK(back.map_kind == spec.map_kind);
    }
}

TEST_CASE("parse errors carry position or field information") {
    CHECK_THROWS_AS((void)parse_scenario(json::object()), ParseError);

    ScenarioSpec spec = find_builtin("two_ball");
    json j = scenario_to_json(spec);
    j["expect"].erase("extend");  // requested check without an expectation
    CHECK_THROWS_AS((void)parse_scenario(j), ParseError);

    j = scenario_to_json(spec);
    j["map"]["kind"] = "wormhole";
    CHECK_THROWS_AS((void)parse_scenario(j), ParseError);
}

TEST_CASE("unknown checks are rejected") {
    ScenarioSpec spec = find_builtin("identity_m2");
    spec.checks = {"bogus"};
    spec.expect = {{"bogus", "Pass"}};
    CHECK_THROWS_AS((void)run_scenario_spec(spec), UnknownCheck);
}

TEST_CASE("exit contract: verdict matching drives all_match") {
    ScenarioSpec spec = find_builtin("unitization_identity");
    const Report good = run_scenario_spec(spec);
    CHECK(good.all_match());

    spec.expect["multiplicativity"] = "Multiplicative";  // wrong on purpose
    const Report bad = run_scenario_spec(spec);
    CHECK_FALSE(bad.all_match());
}

TEST_CASE("a broken custom algebra surfaces as FixtureSelfCheckFailed") {
    ScenarioSpec spec;
    spec.id = "broken_fixture";
    AlgebraDesc custom;
    custom.kind = AlgebraDesc::Kind::Custom;
    custom.dim = 1;
    custom.structure_constants = {std::complex<double>(1.1, 0.0)};  // unit law fails
    custom.unit = Eigen::VectorXcd::Ones(1);
    custom.rule = NormRule::Sup;
    spec.source = spec.target = custom;
    spec.map_kind = MapKind::Identity;
    spec.checks = {"extend"};
    spec.expect = {{"extend", "FixtureSelfCheckFailed"}};
    const Report report = run_scenario_spec(spec);
    CHECK(report.all_match());
    CHECK(report.checks.front().verdict == "FixtureSelfCheckFailed");
}

TEST_CASE("reports are deterministic and round-trip bit-exactly") {
    const ScenarioSpec spec = find_builtin("two_ball");
    const Report r1 = run_scenario_spec(spec);
    const Report r2 = run_scenario_spec(spec);
    CHECK(strip_wall_time(r1.to_json()).dump() == strip_wall_time(r2.to_json()).dump());

    // witness coordinates reparse to identical doubles
    const json j = r1.to_json();
    const json reparsed = json::parse(j.dump());
    bool found_witness = false;
    for (const auto& check : j["checks"]) {
        if (!check.contains("witnesses") || check["witnesses"].empty()) continue;
        found_witness = true;
        const auto& original = check["witnesses"][0]["a"];
        for (const auto& reparsed_check : reparsed["checks"]) {
            if (reparsed_check["name"] != check["name"]) continue;
            const auto& back = reparsed_check["witnesses"][0]["a"];
            for (std::size_t i = 0; i < original.size(); ++i) {
                CHECK(original[i][0].get<double>() == back[i][0].get<double>());
                CHECK(original[i][1].get<double>() == back[i][1].get<double>());
            }
        }
    }
    CHECK(found_witness);
}

TEST_CASE("scenario files load and run") {
    const ScenarioSpec spec = find_builtin("unitization_identity");
    const auto path = std::filesystem::temp_directory_path() / "isolab_scenario_test.json";
    {
        std::ofstream out(path);
        out << scenario_to_json(spec).dump(2);
    }
    const Report report = run_scenario(path);
    CHECK(report.all_match());
    CHECK(report.scenario_id == "unitization_identity");
    std::filesystem::remove(path);

    CHECK_THROWS_AS((void)run_scenario(path), ParseError);  // the file is gone

    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS((void)run_scenario(path), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("every shipped scenario passes its expectations") {
    for (const auto& spec : builtin_scenarios()) {
        const Report report = run_scenario_spec(spec);
        INFO(spec.id);
        CHECK(report.all_match());
    }
}

TEST_CASE("custom algebras flow through scenario JSON end to end") {
    // a valid 2-point function algebra spelled out as raw structure constants
    json custom{{"kind", "custom"},
                {"dim", 2},
                {"norm_rule", "sup"},
                {"unit", json::array({json::array({1.0, 0.0}), json::array({1.0, 0.0})})}};
    json constants = json::array();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const double value = (i == j && j == k) ? 1.0 : 0.0;
                constants.push_back(json::array({value, 0.0}));
            }
    custom["structure_constants"] = constants;

    json j{{"id", "custom_c2"},
           {"source_algebra", custom},
           {"target_algebra", custom},
           {"map", json{{"kind", "identity"}}},
           {"checks", json::array({"extend", "radical"})},
           {"expect", json{{"extend", "ExtendsAsTheorem"}, {"radical", "0/0"}}},
           {"seed", 33}};
    const Report report = run_scenario_spec(parse_scenario(j));
    CHECK(report.all_match());
}
