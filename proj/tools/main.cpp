#include "isolab/catalog.hpp"
#include "isolab/errors.hpp"
#include "isolab/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

void write_report(const isolab::Report& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    out << report.to_json().dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"isolab - isometry extension laboratory for finite-dimensional Banach algebras"};
    app.require_subcommand(1);

    std::string scenario_path, report_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("path", scenario_path, "scenario JSON file")->required();
    run->add_option("--report", report_path, "write the report JSON here");
    run->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_given = true;
    });

    auto* self = app.add_subcommand("selftest", "run the shipped scenario suite and property checks");
    self->add_option("--report", report_path, "write the report JSON here");
    self->add_option("--seed", seed, "mix this seed into every scenario");

    int classify_n = 2, classify_samples = 0;
    std::string form_name = "SimilarityLinear";
    auto* classify = app.add_subcommand("classify", "generate a random map of a form and classify it");
    classify->add_option("--n", classify_n, "matrix size")->required();
    classify->add_option("--samples", classify_samples, "sample count (default 2n^2)");
    classify->add_option("--form", form_name, "SimilarityLinear | TransposeLinear | SimilarityConjugate | TransposeConjugate")
        ->required();
    classify->add_option("--seed", seed, "random seed");
    classify->add_option("--report", report_path, "write the report JSON here");

    std::string dump_dir = "scenarios";
    auto* dump = app.add_subcommand("dump-scenarios", "write the built-in scenario files");
    dump->add_option("dir", dump_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::ifstream in(scenario_path);
            if (!in) throw isolab::ParseError("cannot open scenario file " + scenario_path);
            isolab::json j;
            try {
                j = isolab::json::parse(in);
            } catch (const nlohmann::json::parse_error& err) {
                throw isolab::ParseError("at byte " + std::to_string(err.byte) + ": " + err.what());
            }
            isolab::ScenarioSpec spec = isolab::parse_scenario(j);
            if (seed_given) spec.seed = seed;
            const isolab::Report report = isolab::run_scenario_spec(spec);
            isolab::print_summary(report);
            write_report(report, report_path);
            return report.all_match() ? 0 : 1;
        }
        if (self->parsed()) {
            const isolab::Report report = isolab::selftest(seed);
            isolab::print_summary(report);
            write_report(report, report_path);
            return report.all_match() ? 0 : 1;
        }
        if (classify->parsed()) {
            const isolab::IsometryForm form = [&] {
                for (auto f : {isolab::IsometryForm::SimilarityLinear, isolab::IsometryForm::TransposeLinear,
                               isolab::IsometryForm::SimilarityConjugate,
                               isolab::IsometryForm::TransposeConjugate})
                    if (form_name == isolab::to_string(f)) return f;
                throw isolab::ParseError("unknown form '" + form_name + "'");
            }();
            isolab::Rng rng(seed ^ 0xc1a5);
            const Eigen::MatrixXcd u = isolab::random_conditioned(classify_n, 20.0, rng);
            const Eigen::MatrixXcd u_inv = u.fullPivLu().inverse();
            const auto map = [&](const Eigen::MatrixXcd& m) {
                return Eigen::MatrixXcd(u * isolab::apply_form(form, m) * u_inv);
            };
            if (classify_samples <= 0) classify_samples = 2 * classify_n * classify_n;
            const isolab::ClassificationResult result =
                isolab::classify_matrix_isometry(map, classify_n, classify_samples, seed, 1e-8);
            std::cout << "planted form:    " << form_name << "\n"
                      << "recovered form:  " << isolab::to_string(result.form) << "\n"
                      << "residual:        " << result.residual << "\n"
                      << "U condition:     " << result.u_condition << "\n";
            const Eigen::MatrixXcd planted = isolab::normalize_gauge(u);
            if (result.form != isolab::IsometryForm::NoFormFits)
                std::cout << "relative U error: " << (result.U - planted).norm() / planted.norm() << "\n";
            return result.form == form ? 0 : 1;
        }
        if (dump->parsed()) {
            std::filesystem::create_directories(dump_dir);
            for (const auto& spec : isolab::builtin_scenarios()) {
                std::ofstream out(std::filesystem::path(dump_dir) / (spec.id + ".json"));
                out << isolab::scenario_to_json(spec).dump(2) << '\n';
            }
            std::cout << "wrote " << isolab::builtin_scenarios().size() << " scenario files to "
                      << dump_dir << "\n";
            return 0;
        }
    } catch (const isolab::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 2;
}
