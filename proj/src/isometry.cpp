#include "isolab/isometry.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/radical.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace isolab {

bool UnionOfBalls::contains(const Element& a) const {
    for (const auto& ball : balls)
        if (norm(a - ball.center) < ball.radius) return true;
    return false;
}

bool PartialIsometry::domain_contains(const Element& a) const {
    if (const auto* sg = std::get_if<SubgroupDescriptor>(&domain)) return in_subgroup(a, *sg);
    return std::get<UnionOfBalls>(domain).contains(a);
}

DomainSampler domain_sampler_of(const PartialIsometry& map) {
    DomainSampler s;
    s.algebra = map.source;
    if (const auto* sg = std::get_if<SubgroupDescriptor>(&map.domain)) {
        const SubgroupDescriptor descriptor = *sg;
        const AlgebraPtr algebra = map.source;
        s.contains = [descriptor](const Element& a) { return in_subgroup(a, descriptor); };
        s.draw = [algebra, descriptor](Rng& rng) {
            // products of exponentials lie in the principal component, hence
            // in every open subgroup; custom predicates get rejection sampling
            for (int attempt = 0; attempt < 256; ++attempt) {
                const Element x = random_element(algebra, rng, 0.7);
                const Element y = random_element(algebra, rng, 0.7);
                const Element g = mul(exp_element(x), exp_element(y));
                if (descriptor.kind != SubgroupKind::CustomPredicate || descriptor.predicate(g)) return g;
            }
            throw SamplerExhausted("no principal-component sample satisfied the custom predicate");
        };
        return s;
    }
    const UnionOfBalls balls = std::get<UnionOfBalls>(map.domain);
    s.contains = [balls](const Element& a) { return balls.contains(a); };
    s.draw = [balls](Rng& rng) {
        const Ball& ball = balls.balls[static_cast<std::size_t>(rng.index(balls.balls.size()))];
        Element g = random_element(ball.center.algebra(), rng);
        const double ng = norm(g);
        const double r = ball.radius * 0.999 * rng.uniform();
        if (ng > 0.0) g = (r / ng) * g;
        return ball.center + g;
    };
    return s;
}

DomainSampler full_space_sampler(AlgebraPtr algebra) {
    DomainSampler s;
    s.algebra = algebra;
    s.contains = [](const Element&) { return true; };
    s.draw = [algebra](Rng& rng) {
        static constexpr double scales[3] = {0.25, 1.0, 4.0};
        return random_element(algebra, rng, scales[rng.index(3)]);
    };
    return s;
}

double formula_safe_radius(const PartialIsometry& map) {
    if (map.domain_is_subgroup()) return std::numeric_limits<double>::infinity();
    const auto& balls = std::get<UnionOfBalls>(map.domain).balls;
    double best = 0.0;
    for (const auto& ball : balls) {
        const double margin = ball.radius - norm(ball.center);
        if (margin > 0.0) best = std::max(best, margin / 3.0);
    }
    return best;
}

Element estimate_u0(const PartialIsometry& map) {
    const Element e = map.source->unit();
    constexpr int k_lo = 10, k_hi = 30;
    std::vector<Element> values;
    values.reserve(k_hi - k_lo + 1);
    for (int k = k_lo; k <= k_hi; ++k) {
        const Element a = std::ldexp(1.0, -k) * e;
        if (!map.domain_contains(a))
            throw NoLimit("domain does not contain 2^-" + std::to_string(k) +
                          " e; it is not open around scalars near zero as declared");
        values.push_back(map.forward(a));
    }
    double prev = norm(values[1] - values[0]);
    const double floor = 1e-13 * (1.0 + norm(values.front()));
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        const double next = norm(values[k + 1] - values[k]);
        if (next > 0.9 * prev + floor) {
            std::ostringstream os;
            os << "differences fail geometric contraction at step " << k << ": " << next << " > 0.9*"
               << prev;
            throw NoLimit(os.str());
        }
        prev = next;
    }
    // T(2^-k e) = u0 + 2^-k c for an affine isometry; one Richardson step
    // cancels the 2^-k term exactly.
    const Element& last = values.back();
    const Element& before = values[values.size() - 2];
    return 2.0 * last - before;
}

Element LinearCandidate::apply(const Element& a) const {
    return target->element(linalg::unrealify(matrix_real * linalg::realify(a.coords())));
}

Element LinearCandidate::apply_with_offset(const Element& a) const { return apply(a) + offset; }

Element LinearCandidate::apply_inverse(const Element& b) const {
    const Eigen::VectorXd x = matrix_real.fullPivLu().solve(linalg::realify(b.coords()));
    return source->element(linalg::unrealify(x));
}

double LinearCandidate::complex_linearity_residual() const {
    const Eigen::MatrixXd ja = linalg::imaginary_unit_operator(source->dim());
    const Eigen::MatrixXd jb = linalg::imaginary_unit_operator(target->dim());
    return (matrix_real * ja - jb * matrix_real).norm();
}

bool LinearCandidate::invertible(double rel_tol) const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_real);
    const auto& sv = svd.singularValues();
    return sv.size() > 0 && sv(sv.size() - 1) > rel_tol * sv(0);
}

Element formula_extension(const PartialIsometry& map, const Element& a) {
    const double na = norm(a);
    if (!(na > 0.0)) return map.target->zero();
    const Element e = map.source->unit();
    const Element p = a + (2.0 * na) * e;
    const Element q = (2.0 * na) * e;
    if (!map.domain_is_subgroup()) {
        if (!map.domain_contains(p) || !map.domain_contains(q))
            throw DomainViolation("a + 2||a||e leaves the declared open set at ||a|| = " +
                                  std::to_string(na));
    }
    // T0(p) - T0(q) = T(p) - T(q); the translation part cancels
    return map.forward(p) - map.forward(q);
}

namespace {

LinearCandidate assemble_candidate(const PartialIsometry& map, const Element& u0) {
    const int na = map.source->dim();
    const int nb = map.target->dim();
    double scale = 1.0;
    if (!map.domain_is_subgroup()) {
        const double safe = formula_safe_radius(map);
        if (!(safe > 0.0))
            throw DomainViolation("no ball around scalar zero; the extension formula has no foothold");
        scale = std::min(1.0, 0.9 * safe);
    }

    LinearCandidate cand{map.source, map.target, Eigen::MatrixXd::Zero(2 * nb, 2 * na), u0};
    const std::complex<double> i_unit(0.0, 1.0);
    for (int j = 0; j < 2 * na; ++j) {
        Element dir = map.source->basis_element(j % na);
        if (j >= na) dir = i_unit * dir;
        const double nd = norm(dir);
        const Element probe = (scale / nd) * dir;
        const Element image = formula_extension(map, probe);
        cand.matrix_real.col(j) = linalg::realify(image.coords()) * (nd / scale);
    }
    return cand;
}

struct ResidualTracker {
    double value = 0.0;
    std::optional<FailureWitness> witness;

    void feed(const std::string& check, double v, const Element& a, std::optional<Element> b = {}) {
        if (v > value) {
            value = v;
            witness = FailureWitness{check, a, std::move(b), v};
        }
    }
};

} // namespace

ExtensionReport verify_linear_isometry(const LinearCandidate& cand, const PartialIsometry& map,
                                       int samples, std::uint64_t seed, double tol) {
    ExtensionReport report{cand.offset, false, 0.0, 0.0, 0.0, 0.0, 0.0,
                           std::nullopt, ExtensionVerdict::FailsExtension, std::nullopt, tol};
    const AlgebraPtr A = map.source;
    const AlgebraPtr B = map.target;
    const Element e = A->unit();

    const double safe = formula_safe_radius(map);
    const bool bounded = std::isfinite(safe);
    auto pick_scale = [&](Rng& rng, double cap) {
        static constexpr double scales[3] = {0.25, 1.0, 2.0};
        const double s = scales[rng.index(3)];
        return bounded ? cap * s / 2.0 : s;
    };
    auto random_of_norm = [&](Rng& rng, double target_norm) {
        Element x = random_element(A, rng);
        const double nx = norm(x);
        return nx > 0.0 ? (target_norm / nx) * x : x;
    };

    ResidualTracker additivity, homogeneity, isometry, agreement;

    Rng rng_add = Rng(seed).fork(fnv1a("additivity"));
    for (int s = 0; s < samples; ++s) {
        const Element a = random_of_norm(rng_add, pick_scale(rng_add, 0.9 * safe / 2.0));
        const Element b = random_of_norm(rng_add, pick_scale(rng_add, 0.9 * safe / 2.0));
        const double r = norm(formula_extension(map, a + b) - formula_extension(map, a) -
                              formula_extension(map, b));
        additivity.feed("additivity", r, a, b);
    }
    report.additivity_residual = additivity.value;

    Rng rng_hom = Rng(seed).fork(fnv1a("homogeneity"));
    for (int s = 0; s < samples; ++s) {
        static constexpr double fixed[3] = {0.5, 2.0, -1.0};
        const double rmax = bounded ? 1.0 : 3.0;
        const double r = (s % 4 < 3) ? fixed[s % 4] : rng_hom.uniform(-rmax, rmax);
        const Element a = random_of_norm(rng_hom, pick_scale(rng_hom, safe / (2.0 * std::max(1.0, rmax))));
        const double v = norm(formula_extension(map, r * a) - r * formula_extension(map, a));
        homogeneity.feed("homogeneity", v, a);
    }
    report.homogeneity_residual = homogeneity.value;

    Rng rng_iso = Rng(seed).fork(fnv1a("isometry"));
    for (int s = 0; s < samples; ++s) {
        const Element x = random_element(A, rng_iso, pick_scale(rng_iso, 1.0));
        const double v = std::abs(norm(cand.apply(x)) - norm(x));
        isometry.feed("isometry", v, x);
    }
    report.isometry_residual = isometry.value;

    const DomainSampler domain = domain_sampler_of(map);
    Rng rng_agree = Rng(seed).fork(fnv1a("agreement"));
    for (int s = 0; s < samples; ++s) {
        const Element a = domain.draw(rng_agree);
        const double v = norm(cand.apply_with_offset(a) - map.forward(a));
        agreement.feed("agreement", v, a);
    }
    report.agreement_residual = agreement.value;

    if (map.domain_is_subgroup() && map.has_inverse() && cand.invertible()) {
        // proof recipe: f = T0^-1(b' + T0(r e)) - r e, then the candidate must
        // send f back to b'
        Rng rng_surj = Rng(seed).fork(fnv1a("surjectivity"));
        double worst = 0.0;
        const Element t0e = map.forward(e) - cand.offset;
        const Element t0e_inv = invert(t0e);
        const int probes = std::max(8, samples / 8);
        for (int s = 0; s < probes; ++s) {
            const Element bprime = random_element(B, rng_surj);
            const double r = 2.0 * std::max(norm(bprime), norm(mul(t0e_inv, bprime))) + 1.0;
            const Element t0_re = map.forward(r * e) - cand.offset;
            const Element f = map.inverse(bprime + t0_re + cand.offset) - r * e;
            worst = std::max(worst, norm(cand.apply(f) - bprime));
        }
        report.surjectivity_probe_residual = worst;
    }

    const RadicalBasis rad = dickson_radical(B);
    report.u0_radical_distance = distance_to_radical(cand.offset, rad);
    report.u0_in_radical = report.u0_radical_distance <= 1e-8;

    const bool ok = report.additivity_residual <= tol && report.homogeneity_residual <= tol &&
                    report.isometry_residual <= tol && report.agreement_residual <= tol &&
                    (!report.surjectivity_probe_residual || *report.surjectivity_probe_residual <= tol) &&
                    report.u0_in_radical;
    report.verdict = ok ? ExtensionVerdict::ExtendsAsTheorem : ExtensionVerdict::FailsExtension;
    if (!ok) {
        for (ResidualTracker* t : {&additivity, &homogeneity, &isometry, &agreement})
            if (t->value > tol && t->witness) { report.witness = t->witness; break; }
        if (!report.witness && !report.u0_in_radical)
            report.witness = FailureWitness{"u0_radical", cand.offset, {}, report.u0_radical_distance};
        if (!report.witness && report.surjectivity_probe_residual)
            report.witness = FailureWitness{"surjectivity", cand.offset, {}, *report.surjectivity_probe_residual};
    }
    return report;
}

std::pair<LinearCandidate, ExtensionReport> extend_isometry(const PartialIsometry& map, int samples,
                                                            std::uint64_t seed, double tol) {
    const Element u0 = estimate_u0(map);
    LinearCandidate cand = assemble_candidate(map, u0);
    ExtensionReport report = verify_linear_isometry(cand, map, samples, seed, tol);
    return {std::move(cand), std::move(report)};
}

double midpoint_check(const PartialIsometry& map, const Element& f, const Element& g) {
    for (int k = 0; k < 64; ++k) {
        const double r = static_cast<double>(k) / 63.0;
        const Element x = (1.0 - r) * f + r * g;
        if (!map.domain_contains(x))
            throw SegmentLeavesDomain("segment point at r = " + std::to_string(r) +
                                      " leaves the domain");
    }
    const Element mid = 0.5 * (f + g);
    return norm(map.forward(mid) - 0.5 * (map.forward(f) + map.forward(g)));
}

double reflection_fixed_point_check(const std::vector<Element>& points, const Element& c,
                                    const std::vector<std::size_t>& permutation) {
    const std::size_t m = points.size();
    if (m == 0) throw NotSymmetric("empty point set");
    auto same = [](const Element& x, const Element& y) {
        return (x.coords() - y.coords()).cwiseAbs().maxCoeff() <= 1e-12;
    };

    std::size_t c_index = m;
    for (std::size_t i = 0; i < m; ++i)
        if (same(points[i], c)) { c_index = i; break; }
    if (c_index == m) throw NotSymmetric("center c is not a member of L");

    for (std::size_t i = 0; i < m; ++i) {
        const Element reflected = 2.0 * c - points[i];
        bool found = false;
        for (std::size_t j = 0; j < m; ++j)
            if (same(points[j], reflected)) { found = true; break; }
        if (!found)
            throw NotSymmetric("psi(L) != L: reflection of point " + std::to_string(i) +
                               " is missing from L");
    }

    if (permutation.size() != m) throw NotIsometric("permutation size does not match L");
    std::vector<bool> hit(m, false);
    for (std::size_t p : permutation) {
        if (p >= m || hit[p]) throw NotIsometric("index map is not a bijection of L");
        hit[p] = true;
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double before = norm(points[i] - points[j]);
            const double after = norm(points[permutation[i]] - points[permutation[j]]);
            if (std::abs(before - after) > 1e-9)
                throw NotIsometric("distance (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") changes from " + std::to_string(before) + " to " +
                                   std::to_string(after));
        }

    return norm(points[permutation[c_index]] - c);
}

} // namespace isolab
