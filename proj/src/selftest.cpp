#include "isolab/scenario.hpp"

#include "isolab/errors.hpp"
#include "isolab/radical.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>

namespace isolab {

namespace {

AlgebraDesc matrix_desc(int n) {
    AlgebraDesc d;
    d.kind = AlgebraDesc::Kind::Matrix;
    d.n = n;
    return d;
}

AlgebraDesc function_desc(int k) {
    AlgebraDesc d;
    d.kind = AlgebraDesc::Kind::Function;
    d.n = k;
    return d;
}

AlgebraDesc unitization_zero_desc() {
    AlgebraDesc d;
    d.kind = AlgebraDesc::Kind::UnitizationZero;
    return d;
}
AlgebraDesc unitization_matrix_desc() {
    AlgebraDesc d;
    d.kind = AlgebraDesc::Kind::UnitizationMatrix;
    return d;
}

} // namespace

std::vector<ScenarioSpec> builtin_scenarios() {
    std::vector<ScenarioSpec> specs;

    {
        ScenarioSpec s;
        s.id = "identity_m2";
        s.source = s.target = matrix_desc(2);
        s.map_kind = MapKind::Identity;
        s.checks = {"extend", "multiplicativity", "group_iso", "midpoint", "radical", "numrange"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"multiplicativity", "Multiplicative"},
                    {"group_iso", "ExtendsToIsometricIsomorphism"},
                    {"midpoint", "Pass"},
                    {"radical", "0/0"},
                    {"numrange", "Pass"}};
        s.seed = 11;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "unitary_conjugation_m3";
        s.source = s.target = matrix_desc(3);
        s.map_kind = MapKind::Similarity;
        Rng rng(101);
        s.similarity_u = random_unitary(3, rng);
        s.similarity_form = IsometryForm::SimilarityLinear;
        s.checks = {"extend", "group_iso", "midpoint", "classify"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"group_iso", "ExtendsToIsometricIsomorphism"},
                    {"midpoint", "Pass"},
                    {"classify", "SimilarityLinear"}};
        s.seed = 12;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "conjugation_m2";
        s.source = s.target = matrix_desc(2);
        s.map_kind = MapKind::Similarity;
        s.similarity_u = Eigen::MatrixXcd::Identity(2, 2);
        s.similarity_form = IsometryForm::SimilarityConjugate;
        s.checks = {"extend", "group_iso", "classify"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"group_iso", "ExtendsToIsometricIsomorphism"},
                    {"classify", "SimilarityConjugate"}};
        s.seed = 13;
        specs.push_back(std::move(s));
    }
    {
        // non-unitary similarity: linear and invertibility-preserving but not
        // an isometry, so the engine must refuse the theorem verdict
        ScenarioSpec s;
        s.id = "nonisometric_similarity_m2";
        s.source = s.target = matrix_desc(2);
        s.map_kind = MapKind::Similarity;
        Eigen::MatrixXcd u(2, 2);
        u << 1.0, 1.0, 0.0, 1.0;
        s.similarity_u = u;
        s.similarity_form = IsometryForm::SimilarityLinear;
        s.claims_isometric = false;
        s.checks = {"extend", "classify"};
        s.expect = {{"extend", "FailsExtension"}, {"classify", "SimilarityLinear"}};
        s.seed = 14;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "classify_transpose_n3";
        s.source = s.target = matrix_desc(3);
        s.map_kind = MapKind::Similarity;
        Rng rng(303);
        s.similarity_u = random_conditioned(3, 20.0, rng);
        s.similarity_form = IsometryForm::TransposeLinear;
        s.claims_isometric = false;
        s.checks = {"classify", "multiplicativity"};
        s.expect = {{"classify", "TransposeLinear"}, {"multiplicativity", "AntiMultiplicative"}};
        s.seed = 15;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "swap_cxy";
        s.source = s.target = function_desc(2);
        s.map_kind = MapKind::SwapCoordinates;
        s.flag_source_commutative = true;
        s.flag_target_semisimple = true;
        s.checks = {"extend", "group_iso", "commutative_semisimple", "midpoint", "radical"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"group_iso", "ExtendsToIsometricIsomorphism"},
                    {"commutative_semisimple", "AllConclusionsHold"},
                    {"midpoint", "Pass"},
                    {"radical", "0/0"}};
        s.seed = 16;
        specs.push_back(std::move(s));
    }
    {
        // permutation composed with a unimodular left factor: an isometric
        // group-set map that is not unital; the commutative_semisimple normalisation
        // (T(e))^-1 T recovers the isomorphism
        ScenarioSpec s;
        s.id = "swap_unimodular_c3";
        s.source = s.target = function_desc(3);
        s.map_kind = MapKind::SwapCoordinates;
        s.permutation = {1, 2, 0};
        Eigen::VectorXcd factor(3);
        const std::complex<double> i_unit(0.0, 1.0);
        factor << std::exp(i_unit * 0.7), std::exp(i_unit * 2.1), std::exp(i_unit * -1.3);
        s.unimodular_factor = factor;
        s.flag_source_commutative = true;
        s.flag_target_semisimple = true;
        s.checks = {"extend", "commutative_semisimple"};
        s.expect = {{"extend", "ExtendsAsTheorem"}, {"commutative_semisimple", "AllConclusionsHold"}};
        s.seed = 17;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "translation_unitization";
        s.source = s.target = unitization_matrix_desc();
        s.map_kind = MapKind::TranslationByRadical;
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(4);
        u(2) = 1.0;  // E13
        s.translation_coords = u;
        s.expect_u0 = u;
        s.checks = {"extend", "group_iso", "midpoint"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"group_iso", "HomomorphismClaimFalse"},
                    {"midpoint", "Pass"}};
        s.seed = 18;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "unitization_identity";
        s.source = unitization_zero_desc();
        s.target = unitization_matrix_desc();
        s.map_kind = MapKind::UnitizationIdentity;
        s.flag_source_commutative = true;
        s.flag_target_semisimple = true;  // false: the target radical is 3-dimensional
        s.checks = {"extend", "multiplicativity", "radical", "commutative_semisimple"};
        s.expect = {{"extend", "ExtendsAsTheorem"},
                    {"multiplicativity", "Neither"},
                    {"radical", "3/3"},
                    {"commutative_semisimple", "FlagContradiction"}};
        s.seed = 19;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "two_ball";
        s.source = s.target = function_desc(2);
        s.map_kind = MapKind::TwoBall;
        s.checks = {"extend", "midpoint"};
        s.expect = {{"extend", "FailsExtension"}, {"midpoint", "Pass"}};
        s.seed = 20;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "reflection_cxy";
        s.source = s.target = function_desc(2);
        s.map_kind = MapKind::Identity;
        s.checks = {"reflection", "reflection_asymmetric"};
        s.expect = {{"reflection", "Pass"}, {"reflection_asymmetric", "NotSymmetric"}};
        s.seed = 21;
        specs.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.id = "reflection_m2";
        s.source = s.target = matrix_desc(2);
        s.map_kind = MapKind::Identity;
        s.checks = {"reflection", "reflection_asymmetric"};
        s.expect = {{"reflection", "Pass"}, {"reflection_asymmetric", "NotSymmetric"}};
        s.seed = 22;
        specs.push_back(std::move(s));
    }
    return specs;
}

namespace {

// compact property suites run only by selftest; the full versions live in the
// unit and acceptance test binaries
CheckRecord property_algebra_axioms() {
    CheckRecord rec;
    rec.name = "property_algebra_axioms";
    double worst = 0.0;
    Rng rng(fnv1a("algebra_axioms"));
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    for (const AlgebraPtr& algebra :
         {make_matrix_algebra(2), make_function_algebra(3), uni_zero, uni_matrix}) {
        for (int s = 0; s < 100; ++s) {
            const Element a = random_element(algebra, rng);
            const Element b = random_element(algebra, rng);
            worst = std::max(worst, norm(a + b) - (norm(a) + norm(b)));
            worst = std::max(worst, norm(mul(a, b)) - norm(a) * norm(b));
            const std::complex<double> lambda = rng.cnormal();
            worst = std::max(worst, std::abs(norm(lambda * a) - std::abs(lambda) * norm(a)));
        }
    }
    rec.verdict = worst <= 1e-9 ? "Pass" : "Fail";
    rec.details["residuals"] = json{{"worst_axiom_defect", worst}};
    return rec;
}

CheckRecord property_spectral() {
    CheckRecord rec;
    rec.name = "property_spectral";
    double worst = 0.0;
    Rng rng(fnv1a("spectral"));
    for (const AlgebraPtr& algebra : {make_matrix_algebra(2), make_matrix_algebra(3)}) {
        for (int s = 0; s < 30; ++s) {
            const Element a = random_element(algebra, rng);
            const Element b = random_element(algebra, rng);
            worst = std::max(worst, std::abs(spectrum(mul(a, b)).spectral_radius -
                                             spectrum(mul(b, a)).spectral_radius));
            const double g = gelfand_radius(a, 128);
            const double r = spectrum(a).spectral_radius;
            if (g < r - 1e-6 || g > norm(a) + 1e-6) worst = std::max(worst, 1.0);
        }
    }
    rec.verdict = worst <= 1e-8 ? "Pass" : "Fail";
    rec.details["residuals"] = json{{"worst", worst}};
    return rec;
}

CheckRecord property_radical_cross_oracle() {
    CheckRecord rec;
    rec.name = "property_radical_cross_oracle";
    int disagreements = 0;
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    Rng rng(fnv1a("cross_oracle"));
    for (const AlgebraPtr& algebra : {make_matrix_algebra(2), make_function_algebra(2), uni_zero, uni_matrix}) {
        const RadicalBasis rad = dickson_radical(algebra);
        PrincipalComponentSampler sampler(algebra, fnv1a("sampler"));
        for (int s = 0; s < 20; ++s) {
            Element a = algebra->zero();
            if (s % 2 == 0 && rad.dim_radical > 0)
                for (const auto& u : rad.basis) a = a + rng.cnormal() * u;
            else
                a = random_element(algebra, rng);
            const bool dickson = distance_to_radical(a, rad) <= 1e-8;
            const bool spectral =
                radical_test_spectral(a, sampler, 500).kind == RadicalVerdictKind::ConsistentWithRadical;
            if (dickson != spectral) ++disagreements;
        }
    }
    rec.verdict = disagreements == 0 ? "Pass" : "Fail";
    rec.details["disagreements"] = disagreements;
    return rec;
}

CheckRecord property_numrange() {
    CheckRecord rec;
    rec.name = "property_numrange";
    const AlgebraPtr m2 = make_matrix_algebra(2);
    Eigen::MatrixXcd diag_i0 = Eigen::MatrixXcd::Zero(2, 2);
    diag_i0(0, 0) = std::complex<double>(0.0, 1.0);
    const double v1 = sup_im_numrange(element_from_matrix(m2, diag_i0));
    Eigen::MatrixXcd e12 = Eigen::MatrixXcd::Zero(2, 2);
    e12(0, 1) = 1.0;
    const double v2 = numerical_radius(element_from_matrix(m2, e12));
    const bool ok = std::abs(v1 - 1.0) <= 1e-6 && std::abs(v2 - 0.5) <= 1e-6;
    rec.verdict = ok ? "Pass" : "Fail";
    rec.details["residuals"] = json{{"sup_im_diag_i0", v1}, {"numerical_radius_e12", v2}};
    return rec;
}

} // namespace

Report selftest(std::uint64_t seed_mix) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.scenario_id = "selftest";
    report.seed = seed_mix;
    report.tolerances = json{{"residual", 1e-8}};

    for (ScenarioSpec spec : builtin_scenarios()) {
        spec.seed ^= seed_mix;
        const Report sub = run_scenario_spec(spec);
        for (const CheckRecord& rec : sub.checks) {
            CheckRecord copy = rec;
            copy.name = spec.id + "." + rec.name;
            report.checks.push_back(std::move(copy));
        }
    }
    for (CheckRecord rec :
         {property_algebra_axioms(), property_spectral(), property_radical_cross_oracle(),
          property_numrange()}) {
        rec.expected = "Pass";
        rec.matches_expect = rec.verdict == "Pass";
        report.checks.push_back(std::move(rec));
    }

    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void print_summary(const Report& report) {
    std::cout << std::left << std::setw(44) << "check" << std::setw(32) << "verdict" << std::setw(32)
              << "expected" << "match" << '\n';
    std::cout << std::string(113, '-') << '\n';
    for (const auto& rec : report.checks) {
        std::cout << std::left << std::setw(44) << rec.name << std::setw(32) << rec.verdict
                  << std::setw(32) << (rec.expected.empty() ? "-" : rec.expected)
                  << (rec.matches_expect ? "yes" : "NO") << '\n';
    }
    std::cout << std::string(113, '-') << '\n'
              << (report.all_match() ? "ALL CHECKS MATCH" : "MISMATCHES PRESENT") << "  ("
              << report.checks.size() << " checks, " << std::fixed << std::setprecision(1)
              << report.wall_time_ms << " ms)\n";
}

} // namespace isolab
