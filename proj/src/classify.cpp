#include "isolab/classify.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/radical.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace isolab {

MultiplicativityReport check_multiplicativity(const std::function<Element(const Element&)>& map,
                                              const DomainSampler& sampler, int pairs,
                                              std::uint64_t seed, double threshold) {
    MultiplicativityReport report;
    Rng rng(seed);
    int found = 0, attempts = 0;
    const int max_attempts = 100 * pairs;
    while (found < pairs) {
        if (++attempts > max_attempts)
            throw SamplerExhausted("found only " + std::to_string(found) + " of " +
                                   std::to_string(pairs) + " valid pairs in " +
                                   std::to_string(max_attempts) + " attempts");
        const Element a = sampler.draw(rng);
        const Element b = sampler.draw(rng);
        const Element ab = mul(a, b);
        if (!sampler.contains(ab)) continue;
        ++found;
        const Element lhs = map(ab);
        const Element ta = map(a);
        const Element tb = map(b);
        const double m = norm(lhs - mul(ta, tb));
        const double am = norm(lhs - mul(tb, ta));
        if (std::max(m, am) > std::max(report.mult_residual, report.antimult_residual))
            report.witness = std::make_pair(a, b);
        report.mult_residual = std::max(report.mult_residual, m);
        report.antimult_residual = std::max(report.antimult_residual, am);
    }

    const bool mult_ok = report.mult_residual <= threshold;
    const bool anti_ok = report.antimult_residual <= threshold;
    if (mult_ok && anti_ok) {
        // Both is only claimable when the target really is commutative
        const Element probe = sampler.draw(rng);
        const bool commutative = map(probe).algebra()->commutativity_residual() <= 1e-12;
        report.verdict = commutative ? MultVerdict::Both : MultVerdict::Multiplicative;
    } else if (mult_ok) {
        report.verdict = MultVerdict::Multiplicative;
    } else if (anti_ok) {
        report.verdict = MultVerdict::AntiMultiplicative;
    } else {
        report.verdict = MultVerdict::Neither;
    }
    return report;
}

GroupIsoReport group_iso_extension_pipeline(const PartialIsometry& map, int samples, std::uint64_t seed,
                                            double tol) {
    if (!map.claims_group_homomorphism)
        throw HomomorphismClaimFalse("map '" + map.name + "' does not claim to be a group homomorphism");

    const DomainSampler sampler = domain_sampler_of(map);
    Rng rng = Rng(seed).fork(fnv1a("hom_claim"));
    double hom_residual = 0.0;
    for (int s = 0; s < 200; ++s) {
        const Element a = sampler.draw(rng);
        const Element b = sampler.draw(rng);
        const Element ab = mul(a, b);
        if (!sampler.contains(ab)) continue;
        hom_residual = std::max(hom_residual, norm(map.forward(ab) - mul(map.forward(a), map.forward(b))));
    }
    const Element e = map.source->unit();
    const double unital_residual = norm(map.forward(e) - map.target->unit());
    if (hom_residual > tol || unital_residual > tol) {
        throw HomomorphismClaimFalse("claimed homomorphism fails on samples: ||T(ab)-T(a)T(b)|| up to " +
                                     std::to_string(hom_residual) + ", ||T(e)-e|| = " +
                                     std::to_string(unital_residual));
    }

    GroupIsoReport report{hom_residual, unital_residual, 0.0,
                          LinearCandidate{map.source, map.target, {}, map.target->zero()},
                          ExtensionReport{map.target->zero(), false, 0.0, 0.0, 0.0, 0.0, 0.0,
                                          std::nullopt, ExtensionVerdict::FailsExtension, std::nullopt, tol},
                          0.0, 0.0, false};
    report.u0_norm = norm(estimate_u0(map));

    auto [cand, ext] = extend_isometry(map, samples, seed, tol);
    report.candidate = cand;
    report.extension = ext;

    // multiplicativity of the extension over the whole algebra
    const DomainSampler everywhere = full_space_sampler(map.source);
    const auto apply = [&cand](const Element& x) { return cand.apply(x); };
    const MultiplicativityReport mult =
        check_multiplicativity(apply, everywhere, std::max(64, samples), seed ^ 0x5bd1e995, tol);
    report.extension_mult_residual = mult.mult_residual;

    // r-shift identity: T((a - re)(b - re)) = T(a - re) T(b - re)
    Rng rng_shift = Rng(seed).fork(fnv1a("rshift"));
    double rshift = 0.0;
    for (int s = 0; s < std::max(32, samples / 4); ++s) {
        const Element a = random_element(map.source, rng_shift);
        const Element b = random_element(map.source, rng_shift);
        const double r = 2.0 * (norm(a) + norm(b)) + 1.0;
        const Element as = a - r * e;
        const Element bs = b - r * e;
        rshift = std::max(rshift, norm(map.forward(mul(as, bs)) - mul(map.forward(as), map.forward(bs))));
    }
    report.rshift_residual = rshift;

    report.extends_to_isometric_isomorphism =
        report.u0_norm <= tol && ext.verdict == ExtensionVerdict::ExtendsAsTheorem &&
        report.extension_mult_residual <= tol && rshift <= tol && cand.invertible();
    return report;
}

CommutativeSemisimpleReport commutative_semisimple_pipeline(const PartialIsometry& map, bool source_commutative_flag,
                             bool target_semisimple_flag, int samples, std::uint64_t seed, double tol) {
    CommutativeSemisimpleReport report{0.0,
                        0,
                        LinearCandidate{map.source, map.target, {}, map.target->zero()},
                        ExtensionReport{map.target->zero(), false, 0.0, 0.0, 0.0, 0.0, 0.0,
                                        std::nullopt, ExtensionVerdict::FailsExtension, std::nullopt, tol},
                        0.0, 0.0, 0, false, false, false};
    report.source_commutativity_residual = map.source->commutativity_residual();
    report.target_radical_dim = dickson_radical(map.target).dim_radical;

    if (source_commutative_flag && report.source_commutativity_residual > 1e-12)
        throw FlagContradiction("source declared commutative but structure constants differ by " +
                                std::to_string(report.source_commutativity_residual));
    if (target_semisimple_flag && report.target_radical_dim != 0)
        throw FlagContradiction("target declared semisimple but its radical has dimension " +
                                std::to_string(report.target_radical_dim));
    if (!source_commutative_flag || !target_semisimple_flag)
        throw FlagContradiction("pipeline hypotheses require source commutative and target semisimple");

    // T' = (T(e_A))^-1 T
    const Element te_inv = invert(map.forward(map.source->unit()));
    PartialIsometry shifted = map;
    const auto base = map.forward;
    shifted.forward = [te_inv, base](const Element& x) { return mul(te_inv, base(x)); };
    shifted.inverse = {};  // the composed inverse is not needed by the checks below
    shifted.name = map.name + "_unitalized";

    auto [cand, ext] = extend_isometry(shifted, samples, seed, tol);
    report.candidate = cand;
    report.extension = ext;

    const DomainSampler everywhere = full_space_sampler(map.source);
    const auto apply = [&cand](const Element& x) { return cand.apply(x); };
    const MultiplicativityReport mult =
        check_multiplicativity(apply, everywhere, std::max(64, samples), seed ^ 0x5bd1e995, tol);
    report.extension_mult_residual = mult.mult_residual;

    report.target_commutativity_residual = map.target->commutativity_residual();
    report.source_radical_dim = dickson_radical(map.source).dim_radical;

    report.verdict_extension = ext.verdict == ExtensionVerdict::ExtendsAsTheorem &&
                               report.extension_mult_residual <= tol && cand.invertible();
    report.verdict_source_semisimple = report.source_radical_dim == 0;
    report.verdict_target_commutative = report.target_commutativity_residual <= 1e-12;
    return report;
}

const char* to_string(IsometryForm form) {
    switch (form) {
        case IsometryForm::SimilarityLinear: return "SimilarityLinear";
        case IsometryForm::TransposeLinear: return "TransposeLinear";
        case IsometryForm::SimilarityConjugate: return "SimilarityConjugate";
        case IsometryForm::TransposeConjugate: return "TransposeConjugate";
        case IsometryForm::NoFormFits: return "NoFormFits";
    }
    return "NoFormFits";
}

Eigen::MatrixXcd apply_form(IsometryForm form, const Eigen::MatrixXcd& m) {
    switch (form) {
        case IsometryForm::SimilarityLinear: return m;
        case IsometryForm::TransposeLinear: return m.transpose();
        case IsometryForm::SimilarityConjugate: return m.conjugate();
        case IsometryForm::TransposeConjugate: return m.adjoint();
        case IsometryForm::NoFormFits: break;
    }
    return m;
}

Eigen::MatrixXcd normalize_gauge(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd out = u / u.norm();
    const double cutoff = 1e-10 * out.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            if (std::abs(out(i, j)) > cutoff) {
                const std::complex<double> phase = out(i, j) / std::abs(out(i, j));
                return out / phase;
            }
    return out;
}

ClassificationResult classify_matrix_isometry_with_samples(
    const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& map, int n,
    const std::vector<Eigen::MatrixXcd>& sample_matrices, double tol) {
    if (n < 2) throw IncompatibleSpec("classification needs n >= 2");
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
    ClassificationResult result;
    result.scale = map(identity);
    const Eigen::MatrixXcd scale_inv = result.scale.fullPivLu().inverse();

    const auto nn = static_cast<Eigen::Index>(n) * n;
    const auto rows = static_cast<Eigen::Index>(sample_matrices.size()) * nn;

    std::array<Eigen::MatrixXcd, 4> candidates;
    constexpr std::array<IsometryForm, 4> forms = {
        IsometryForm::SimilarityLinear, IsometryForm::TransposeLinear,
        IsometryForm::SimilarityConjugate, IsometryForm::TransposeConjugate};

    std::vector<Eigen::MatrixXcd> normalized;
    normalized.reserve(sample_matrices.size());
    for (const auto& m : sample_matrices) normalized.push_back(scale_inv * map(m));

    for (std::size_t f = 0; f < 4; ++f) {
        Eigen::MatrixXcd stack(rows, nn);
        for (std::size_t s = 0; s < sample_matrices.size(); ++s) {
            // R(M) U - U phi(M) = 0  ==>  (I (x) R - phi(M)^t (x) I) vec(U) = 0
            const Eigen::MatrixXcd phi = apply_form(forms[f], sample_matrices[s]);
            stack.middleRows(static_cast<Eigen::Index>(s) * nn, nn) =
                linalg::kron(Eigen::MatrixXcd::Identity(n, n), normalized[s]) -
                linalg::kron(phi.transpose(), Eigen::MatrixXcd::Identity(n, n));
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        result.hypothesis_residuals[f] = sv(sv.size() - 1) / sv(0);
        candidates[f] = Eigen::Map<const Eigen::MatrixXcd>(svd.matrixV().col(nn - 1).data(), n, n);
    }

    int winner = -1;
    for (int f = 0; f < 4; ++f) {
        if (result.hypothesis_residuals[static_cast<std::size_t>(f)] > tol) continue;
        if (winner >= 0)
            throw AmbiguousForm(std::string("both ") + to_string(forms[static_cast<std::size_t>(winner)]) +
                                " and " + to_string(forms[static_cast<std::size_t>(f)]) +
                                " fit below tolerance");
        winner = f;
    }
    if (winner < 0) {
        result.form = IsometryForm::NoFormFits;
        result.residual = *std::min_element(result.hypothesis_residuals.begin(),
                                            result.hypothesis_residuals.end());
        return result;
    }

    const auto w = static_cast<std::size_t>(winner);
    Eigen::JacobiSVD<Eigen::MatrixXcd> usvd(candidates[w]);
    const auto& usv = usvd.singularValues();
    if (usv(usv.size() - 1) <= 1e-10 * usv(0))
        throw SingularRecoveredU("hypothesis " + std::string(to_string(forms[w])) +
                                 " passed but its recovered U is singular");
    result.form = forms[w];
    result.U = normalize_gauge(candidates[w]);
    result.residual = result.hypothesis_residuals[w];
    result.u_condition = usv(0) / usv(usv.size() - 1);
    return result;
}

ClassificationResult classify_matrix_isometry(
    const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& map, int n, int samples,
    std::uint64_t seed, double tol) {
    if (n < 2) throw IncompatibleSpec("classification needs n >= 2");
    if (samples < 2 * n * n)
        throw IncompatibleSpec("need at least 2n^2 = " + std::to_string(2 * n * n) + " samples");
    Rng rng(seed);
    std::vector<Eigen::MatrixXcd> sample_matrices;
    sample_matrices.reserve(static_cast<std::size_t>(samples));
    while (sample_matrices.size() < static_cast<std::size_t>(samples)) {
        Eigen::MatrixXcd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.cnormal();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        if (svd.singularValues()(n - 1) > 1e-3) sample_matrices.push_back(std::move(m));
    }
    return classify_matrix_isometry_with_samples(map, n, sample_matrices, tol);
}

} // namespace isolab
