#include "isolab/scenario.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/radical.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace isolab {

// ---------------------------------------------------------------------------
// JSON encoding: complex as [re, im], vectors as arrays of pairs, matrices as
// {rows, cols, data} with data flat row-major.
// ---------------------------------------------------------------------------

namespace {

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Eigen::VectorXcd vector_from_json(const json& j) {
    Eigen::VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ParseError("matrix data length does not match rows*cols");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(data[static_cast<std::size_t>(i * cols + c)]);
    return m;
}

json element_to_json(const Element& a) { return vector_to_json(a.coords()); }

const char* norm_rule_name(NormRule rule) {
    switch (rule) {
        case NormRule::Sup: return "sup";
        case NormRule::MatrixOperator: return "matrix_operator";
        case NormRule::RegularRepOperator: return "regular_rep_operator";
    }
    return "regular_rep_operator";
}

NormRule norm_rule_from_name(const std::string& name) {
    if (name == "sup") return NormRule::Sup;
    if (name == "matrix_operator") return NormRule::MatrixOperator;
    if (name == "regular_rep_operator") return NormRule::RegularRepOperator;
    throw ParseError("unknown norm rule '" + name + "'");
}

json algebra_desc_to_json(const AlgebraDesc& d) {
    switch (d.kind) {
        case AlgebraDesc::Kind::Matrix: return json{{"kind", "matrix"}, {"n", d.n}};
        case AlgebraDesc::Kind::Function: return json{{"kind", "function"}, {"k", d.n}};
        case AlgebraDesc::Kind::UnitizationZero: return json{{"kind", "unitization_zero"}};
        case AlgebraDesc::Kind::UnitizationMatrix: return json{{"kind", "unitization_matrix"}};
        case AlgebraDesc::Kind::Custom: {
            json constants = json::array();
            for (const auto& z : d.structure_constants) constants.push_back(complex_to_json(z));
            json out{{"kind", "custom"},
                     {"dim", d.dim},
                     {"structure_constants", std::move(constants)},
                     {"unit", vector_to_json(d.unit)},
                     {"norm_rule", norm_rule_name(d.rule)}};
            if (!d.embedding.empty()) {
                json emb = json::array();
                for (const auto& m : d.embedding) emb.push_back(matrix_to_json(m));
                out["embedding"] = std::move(emb);
            }
            return out;
        }
    }
    throw ParseError("unknown algebra kind");
}

AlgebraDesc algebra_desc_from_json(const json& j) {
    AlgebraDesc d;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "matrix") {
        d.kind = AlgebraDesc::Kind::Matrix;
        d.n = j.at("n").get<int>();
    } else if (kind == "function") {
        d.kind = AlgebraDesc::Kind::Function;
        d.n = j.at("k").get<int>();
    } else if (kind == "unitization_zero") {
        d.kind = AlgebraDesc::Kind::UnitizationZero;
    } else if (kind == "unitization_matrix") {
        d.kind = AlgebraDesc::Kind::UnitizationMatrix;
    } else if (kind == "custom") {
        d.kind = AlgebraDesc::Kind::Custom;
        d.dim = j.at("dim").get<int>();
        for (const auto& z : j.at("structure_constants")) d.structure_constants.push_back(complex_from_json(z));
        d.unit = vector_from_json(j.at("unit"));
        d.rule = norm_rule_from_name(j.at("norm_rule").get<std::string>());
        if (j.contains("embedding"))
            for (const auto& m : j.at("embedding")) d.embedding.push_back(matrix_from_json(m));
    } else {
        throw ParseError("unknown algebra kind '" + kind + "'");
    }
    return d;
}

const char* map_kind_name(MapKind kind) {
    switch (kind) {
        case MapKind::Identity: return "identity";
        case MapKind::TranslationByRadical: return "translation_by_radical";
        case MapKind::Similarity: return "similarity";
        case MapKind::TwoBall: return "two_ball";
        case MapKind::UnitizationIdentity: return "unitization_identity";
        case MapKind::SwapCoordinates: return "swap_coordinates";
        case MapKind::CustomTable: return "custom_table";
    }
    return "identity";
}

MapKind map_kind_from_name(const std::string& name) {
    if (name == "identity") return MapKind::Identity;
    if (name == "translation_by_radical") return MapKind::TranslationByRadical;
    if (name == "similarity") return MapKind::Similarity;
    if (name == "two_ball") return MapKind::TwoBall;
    if (name == "unitization_identity") return MapKind::UnitizationIdentity;
    if (name == "swap_coordinates") return MapKind::SwapCoordinates;
    if (name == "custom_table") return MapKind::CustomTable;
    throw ParseError("unknown map kind '" + name + "'");
}

const char* form_name(IsometryForm f) { return to_string(f); }

IsometryForm form_from_name(const std::string& name) {
    for (IsometryForm f : {IsometryForm::SimilarityLinear, IsometryForm::TransposeLinear,
                           IsometryForm::SimilarityConjugate, IsometryForm::TransposeConjugate})
        if (name == to_string(f)) return f;
    throw ParseError("unknown form '" + name + "'");
}

} // namespace

json scenario_to_json(const ScenarioSpec& spec) {
    json map{{"kind", map_kind_name(spec.map_kind)}};
    switch (spec.map_kind) {
        case MapKind::TranslationByRadical:
            map["u"] = vector_to_json(spec.translation_coords);
            break;
        case MapKind::Similarity:
            map["U"] = matrix_to_json(spec.similarity_u);
            map["form"] = form_name(spec.similarity_form);
            map["claims_isometric"] = spec.claims_isometric;
            break;
        case MapKind::SwapCoordinates:
            if (!spec.permutation.empty()) map["permutation"] = spec.permutation;
            if (spec.unimodular_factor.size() > 0) map["factor"] = vector_to_json(spec.unimodular_factor);
            break;
        case MapKind::CustomTable: {
            json table = json::array();
            for (const auto& [in, out] : spec.table)
                table.push_back(json{{"in", vector_to_json(in)}, {"out", vector_to_json(out)}});
            map["table"] = std::move(table);
            break;
        }
        default: break;
    }

    json expect = json::object();
    for (const auto& [check, verdict] : spec.expect) expect[check] = verdict;

    json out{{"id", spec.id},
             {"source_algebra", algebra_desc_to_json(spec.source)},
             {"target_algebra", algebra_desc_to_json(spec.target)},
             {"map", std::move(map)},
             {"checks", spec.checks},
             {"expect", std::move(expect)},
             {"tolerances", json{{"residual", spec.tol_residual}}},
             {"samples", spec.samples},
             {"pairs", spec.pairs},
             {"segments", spec.segments},
             {"seed", spec.seed}};
    if (spec.expect_u0) out["expect_u0"] = vector_to_json(*spec.expect_u0);
    if (spec.flag_source_commutative) out["flag_source_commutative"] = true;
    if (spec.flag_target_semisimple) out["flag_target_semisimple"] = true;
    return out;
}

ScenarioSpec parse_scenario(const json& j) {
    ScenarioSpec spec;
    try {
        spec.id = j.at("id").get<std::string>();
        spec.source = algebra_desc_from_json(j.at("source_algebra"));
        spec.target = algebra_desc_from_json(j.at("target_algebra"));
        const json& map = j.at("map");
        spec.map_kind = map_kind_from_name(map.at("kind").get<std::string>());
        if (map.contains("u")) spec.translation_coords = vector_from_json(map.at("u"));
        if (map.contains("U")) spec.similarity_u = matrix_from_json(map.at("U"));
        if (map.contains("form")) spec.similarity_form = form_from_name(map.at("form").get<std::string>());
        if (map.contains("claims_isometric")) spec.claims_isometric = map.at("claims_isometric").get<bool>();
        if (map.contains("permutation")) spec.permutation = map.at("permutation").get<std::vector<int>>();
        if (map.contains("factor")) spec.unimodular_factor = vector_from_json(map.at("factor"));
        if (map.contains("table"))
            for (const auto& row : map.at("table"))
                spec.table.emplace_back(vector_from_json(row.at("in")), vector_from_json(row.at("out")));
        spec.checks = j.at("checks").get<std::vector<std::string>>();
        for (const auto& [check, verdict] : j.at("expect").items())
            spec.expect[check] = verdict.get<std::string>();
        for (const auto& check : spec.checks)
            if (!spec.expect.count(check))
                throw ParseError("check '" + check + "' has no expected verdict");
        if (j.contains("tolerances") && j.at("tolerances").contains("residual"))
            spec.tol_residual = j.at("tolerances").at("residual").get<double>();
        if (j.contains("samples")) spec.samples = j.at("samples").get<int>();
        if (j.contains("pairs")) spec.pairs = j.at("pairs").get<int>();
        if (j.contains("segments")) spec.segments = j.at("segments").get<int>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("expect_u0")) spec.expect_u0 = vector_from_json(j.at("expect_u0"));
        if (j.contains("flag_source_commutative"))
            spec.flag_source_commutative = j.at("flag_source_commutative").get<bool>();
        if (j.contains("flag_target_semisimple"))
            spec.flag_target_semisimple = j.at("flag_target_semisimple").get<bool>();
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(err.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------
// check implementations
// ---------------------------------------------------------------------------

namespace {

std::uint64_t check_seed(const ScenarioSpec& spec, const char* check) {
    return spec.seed ^ fnv1a(check);
}

json witness_to_json(const FailureWitness& w, const PartialIsometry& map, const LinearCandidate& cand) {
    json out{{"check", w.check}, {"discrepancy", w.discrepancy}, {"a", element_to_json(w.a)}};
    if (w.b) out["b"] = element_to_json(*w.b);
    if (w.check == "agreement") {
        out["mapped"] = element_to_json(map.forward(w.a));
        out["candidate"] = element_to_json(cand.apply_with_offset(w.a));
    }
    return out;
}

CheckRecord run_extend(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "extend";
    try {
        auto [cand, report] = extend_isometry(map, spec.samples, check_seed(spec, "extend"),
                                              spec.tol_residual);
        rec.verdict = report.verdict == ExtensionVerdict::ExtendsAsTheorem ? "ExtendsAsTheorem"
                                                                           : "FailsExtension";
        rec.details["residuals"] = json{
            {"additivity", report.additivity_residual},
            {"homogeneity", report.homogeneity_residual},
            {"isometry", report.isometry_residual},
            {"agreement", report.agreement_residual},
            {"surjectivity", report.surjectivity_probe_residual
                                 ? json(*report.surjectivity_probe_residual)
                                 : json(nullptr)},
            {"u0_radical_distance", report.u0_radical_distance}};
        rec.details["u0"] = element_to_json(report.u0);
        rec.details["complex_linear"] = cand.is_complex_linear();
        rec.details["witnesses"] = json::array();
        if (report.witness)
            rec.details["witnesses"].push_back(witness_to_json(*report.witness, map, cand));
        if (spec.expect_u0) {
            const double dist =
                norm(report.u0 - report.u0.algebra()->element(*spec.expect_u0));
            rec.details["u0_distance_to_expected"] = dist;
            if (dist > 1e-9) rec.verdict += "+U0Mismatch";
        }
    } catch (const Error& err) {
        rec.verdict = err.code();
        rec.details["error"] = err.what();
    }
    return rec;
}

CheckRecord run_midpoint(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "midpoint";
    const DomainSampler sampler = domain_sampler_of(map);
    Rng rng(check_seed(spec, "midpoint"));
    double worst = 0.0;
    int accepted = 0, rejected = 0;
    while (accepted < spec.segments) {
        const Element f = sampler.draw(rng);
        Element g = f;
        if (map.domain_is_subgroup()) {
            // pick g = f + delta with ||f^-1 delta|| < 0.8, so the whole
            // segment f(e + r f^-1 delta) stays invertible
            const Element delta = random_element(map.source, rng, 0.5);
            const double pull = norm(mul(invert(f), delta));
            g = f + (pull > 0 ? std::min(1.0, 0.8 / pull) : 1.0) * delta;
        } else {
            g = sampler.draw(rng);
        }
        try {
            worst = std::max(worst, midpoint_check(map, f, g));
            ++accepted;
        } catch (const SegmentLeavesDomain&) {
            if (++rejected > 100 * spec.segments)
                throw SamplerExhausted("could not find in-domain segments");
        }
    }
    rec.verdict = worst <= 1e-9 ? "Pass" : "Fail";
    rec.details["residuals"] = json{{"max_midpoint", worst}};
    rec.details["segments"] = accepted;
    rec.details["rejected_segments"] = rejected;
    return rec;
}

// symmetric sets {c} u {c +/- v_i} and the induced reflection permutation
CheckRecord run_reflection(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "reflection";
    Rng rng(check_seed(spec, "reflection"));
    const AlgebraPtr B = map.target;
    double worst = 0.0;
    for (int set_index = 0; set_index < 20; ++set_index) {
        const Element c = random_element(B, rng);
        const int spokes = 3 + static_cast<int>(rng.index(8));
        std::vector<Element> points;
        points.push_back(c);
        for (int s = 0; s < spokes; ++s) {
            const Element v = random_element(B, rng);
            points.push_back(c + v);
            points.push_back(c - v);
        }
        // the reflection z -> 2c - z itself, as an index permutation
        std::vector<std::size_t> perm(points.size());
        perm[0] = 0;
        for (std::size_t i = 1; i < points.size(); i += 2) {
            perm[i] = i + 1;
            perm[i + 1] = i;
        }
        worst = std::max(worst, reflection_fixed_point_check(points, c, perm));
    }
    rec.verdict = worst <= 1e-9 ? "Pass" : "Fail";
    rec.details["residuals"] = json{{"max_fixed_point", worst}};
    rec.details["sets"] = 20;
    return rec;
}

CheckRecord run_reflection_asymmetric(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "reflection_asymmetric";
    Rng rng(check_seed(spec, "reflection_asymmetric"));
    const Element c = random_element(map.target, rng);
    const Element v = random_element(map.target, rng);
    const std::vector<Element> points{c, c + v};  // psi(c+v) = c-v is missing
    try {
        reflection_fixed_point_check(points, c, {0, 1});
        rec.verdict = "Fail";
    } catch (const NotSymmetric& err) {
        rec.verdict = "NotSymmetric";
        rec.details["error"] = err.what();
    }
    return rec;
}

const char* mult_verdict_name(MultVerdict v) {
    switch (v) {
        case MultVerdict::Multiplicative: return "Multiplicative";
        case MultVerdict::AntiMultiplicative: return "AntiMultiplicative";
        case MultVerdict::Both: return "Both";
        case MultVerdict::Neither: return "Neither";
    }
    return "Neither";
}

CheckRecord run_multiplicativity(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "multiplicativity";
    const MultiplicativityReport report =
        check_multiplicativity(map.forward, domain_sampler_of(map), spec.pairs,
                               check_seed(spec, "multiplicativity"), spec.tol_residual);
    rec.verdict = mult_verdict_name(report.verdict);
    rec.details["residuals"] =
        json{{"mult", report.mult_residual}, {"antimult", report.antimult_residual}};
    if (report.witness)
        rec.details["witnesses"] = json::array({json{{"a", element_to_json(report.witness->first)},
                                                     {"b", element_to_json(report.witness->second)}}});
    return rec;
}

CheckRecord run_group_iso(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "group_iso";
    try {
        const GroupIsoReport report =
            group_iso_extension_pipeline(map, spec.samples, check_seed(spec, "group_iso"),
                                         spec.tol_residual);
        rec.verdict = report.extends_to_isometric_isomorphism ? "ExtendsToIsometricIsomorphism" : "Fails";
        rec.details["residuals"] = json{{"homomorphism", report.homomorphism_residual},
                                        {"unital", report.unital_residual},
                                        {"u0_norm", report.u0_norm},
                                        {"extension_mult", report.extension_mult_residual},
                                        {"rshift", report.rshift_residual},
                                        {"agreement", report.extension.agreement_residual}};
    } catch (const Error& err) {
        rec.verdict = err.code();
        rec.details["error"] = err.what();
    }
    return rec;
}

CheckRecord run_commutative_semisimple(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "commutative_semisimple";
    try {
        const CommutativeSemisimpleReport report =
            commutative_semisimple_pipeline(map, spec.flag_source_commutative, spec.flag_target_semisimple,
                            spec.samples, check_seed(spec, "commutative_semisimple"), spec.tol_residual);
        rec.verdict = report.all_conclusions_hold() ? "AllConclusionsHold" : "Fails";
        rec.details["verdicts"] = json{{"extension", report.verdict_extension},
                                       {"source_semisimple", report.verdict_source_semisimple},
                                       {"target_commutative", report.verdict_target_commutative}};
        rec.details["residuals"] = json{{"extension_mult", report.extension_mult_residual},
                                        {"target_commutativity", report.target_commutativity_residual},
                                        {"source_radical_dim", report.source_radical_dim}};
    } catch (const Error& err) {
        rec.verdict = err.code();
        rec.details["error"] = err.what();
    }
    return rec;
}

CheckRecord run_classify(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "classify";
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(map.source->dim()))));
    const AlgebraPtr source = map.source;
    const auto forward = map.forward;
    const auto handle = [source, forward](const Eigen::MatrixXcd& m) {
        return matrix_from_element(forward(element_from_matrix(source, m)));
    };
    try {
        const int samples = std::max(spec.samples, 2 * n * n);
        const ClassificationResult result =
            classify_matrix_isometry(handle, n, samples, check_seed(spec, "classify"),
                                     spec.tol_residual);
        rec.verdict = to_string(result.form);
        rec.details["residuals"] = json{{"SimilarityLinear", result.hypothesis_residuals[0]},
                                        {"TransposeLinear", result.hypothesis_residuals[1]},
                                        {"SimilarityConjugate", result.hypothesis_residuals[2]},
                                        {"TransposeConjugate", result.hypothesis_residuals[3]}};
        if (result.form != IsometryForm::NoFormFits) {
            rec.details["U"] = matrix_to_json(result.U);
            rec.details["u_condition"] = result.u_condition;
        }
        rec.details["scale"] = matrix_to_json(result.scale);
    } catch (const Error& err) {
        rec.verdict = err.code();
        rec.details["error"] = err.what();
    }
    return rec;
}

CheckRecord run_radical(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "radical";
    const RadicalBasis rad_a = dickson_radical(map.source);
    const RadicalBasis rad_b = dickson_radical(map.target);

    // cross-oracle agreement: Dickson membership <=> no spectral witness
    int disagreements = 0;
    for (const AlgebraPtr& algebra : {map.source, map.target}) {
        const RadicalBasis rad = dickson_radical(algebra);
        PrincipalComponentSampler sampler(algebra, check_seed(spec, "radical"));
        Rng rng(check_seed(spec, "radical_elements"));
        for (int s = 0; s < 40; ++s) {
            Element a = algebra->zero();
            if (s % 2 == 0 && rad.dim_radical > 0) {
                for (const auto& u : rad.basis) a = a + rng.cnormal() * u;
            } else {
                a = random_element(algebra, rng);
            }
            const bool dickson_member = distance_to_radical(a, rad) <= 1e-8;
            const RadicalVerdict verdict = radical_test_spectral(a, sampler, 500);
            const bool spectral_member = verdict.kind == RadicalVerdictKind::ConsistentWithRadical;
            if (dickson_member != spectral_member) ++disagreements;
        }
    }
    rec.verdict = disagreements == 0 ? std::to_string(rad_a.dim_radical) + "/" +
                                           std::to_string(rad_b.dim_radical)
                                     : "Disagree";
    rec.details["source_radical_dim"] = rad_a.dim_radical;
    rec.details["target_radical_dim"] = rad_b.dim_radical;
    rec.details["cross_oracle_disagreements"] = disagreements;
    return rec;
}

CheckRecord run_numrange(const ScenarioSpec& spec, const PartialIsometry& map) {
    CheckRecord rec;
    rec.name = "numrange";
    Rng rng(check_seed(spec, "numrange"));
    double worst_hermitian = 0.0;
    int norm_bound_failures = 0;
    for (const AlgebraPtr& algebra : {map.source, map.target}) {
        for (int s = 0; s < spec.samples; ++s) {
            const Element b = random_element(algebra, rng);
            if (!check_norm_numradius(b)) ++norm_bound_failures;
        }
        // Hermitian-like samples: real coordinates in sup algebras, Hermitian
        // concrete matrices otherwise
        for (int s = 0; s < 50; ++s) {
            Element h = algebra->zero();
            if (algebra->norm_rule() == NormRule::Sup) {
                Eigen::VectorXcd c(algebra->dim());
                for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
                h = algebra->element(std::move(c));
            } else if (algebra->has_embedding() && algebra->name().rfind("M", 0) == 0) {
                const Element x = random_element(algebra, rng);
                const Eigen::MatrixXcd m = algebra->embed(x);
                h = element_from_matrix(algebra, 0.5 * (m + m.adjoint()));
            } else {
                continue;  // no Hermitian notion for generic embeddings
            }
            worst_hermitian = std::max(worst_hermitian, std::abs(sup_im_numrange(h)));
        }
    }
    rec.verdict = (norm_bound_failures == 0 && worst_hermitian <= 1e-8) ? "Pass" : "Fail";
    rec.details["residuals"] =
        json{{"max_hermitian_sup_im", worst_hermitian}, {"norm_bound_failures", norm_bound_failures}};
    return rec;
}

} // namespace

bool Report::all_match() const {
    for (const auto& rec : checks)
        if (!rec.matches_expect) return false;
    return true;
}

json Report::to_json() const {
    json out{{"scenario_id", scenario_id}, {"seed", seed}, {"tolerances", tolerances}};
    json check_array = json::array();
    for (const auto& rec : checks) {
        json r{{"name", rec.name},
               {"verdict", rec.verdict},
               {"expected", rec.expected},
               {"matches_expect", rec.matches_expect}};
        for (const auto& [key, value] : rec.details.items()) r[key] = value;
        check_array.push_back(std::move(r));
    }
    out["checks"] = std::move(check_array);
    out["wall_time_ms"] = wall_time_ms;
    return out;
}

Report run_scenario_spec(const ScenarioSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.scenario_id = spec.id;
    report.seed = spec.seed;
    report.tolerances = json{{"residual", spec.tol_residual}};

    std::optional<PartialIsometry> map;
    std::optional<CheckRecord> fixture_failure;
    try {
        map = make_map(spec);
    } catch (const Error& err) {
        CheckRecord failed;
        failed.name = "fixture";
        failed.verdict = err.code();
        fixture_failure = failed;
        fixture_failure->details["error"] = err.what();
    }

    for (const auto& check : spec.checks) {
        CheckRecord rec;
        if (fixture_failure) {
            rec = *fixture_failure;
            rec.name = check;
            rec.verdict = fixture_failure->verdict;
        } else if (check == "extend") {
            rec = run_extend(spec, *map);
        } else if (check == "midpoint") {
            rec = run_midpoint(spec, *map);
        } else if (check == "reflection") {
            rec = run_reflection(spec, *map);
        } else if (check == "reflection_asymmetric") {
            rec = run_reflection_asymmetric(spec, *map);
        } else if (check == "multiplicativity") {
            rec = run_multiplicativity(spec, *map);
        } else if (check == "group_iso") {
            rec = run_group_iso(spec, *map);
        } else if (check == "commutative_semisimple") {
            rec = run_commutative_semisimple(spec, *map);
        } else if (check == "classify") {
            rec = run_classify(spec, *map);
        } else if (check == "radical") {
            rec = run_radical(spec, *map);
        } else if (check == "numrange") {
            rec = run_numrange(spec, *map);
        } else {
            throw UnknownCheck("'" + check + "' is not a known check");
        }
        rec.expected = spec.expect.at(check);
        rec.matches_expect = rec.verdict == rec.expected;
        report.checks.push_back(std::move(rec));
    }
    if (map) {
        CheckRecord fixture;
        fixture.name = "fixture";
        fixture.verdict = "Ok";
        fixture.matches_expect = true;
        fixture.details["map"] = map->name;
        fixture.details["measured_isometry_defect"] = map->measured_isometry_defect;
        report.checks.insert(report.checks.begin(), std::move(fixture));
    }

    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Report run_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError("at byte " + std::to_string(err.byte) + ": " + err.what());
    }
    return run_scenario_spec(parse_scenario(j));
}

} // namespace isolab
