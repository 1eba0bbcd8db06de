#include "isolab/catalog.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/radical.hpp"

#include <Eigen/QR>
#include <cmath>

namespace isolab {

namespace {

std::vector<std::complex<double>> zero_tensor(int dim) {
    const auto n = static_cast<std::size_t>(dim);
    return std::vector<std::complex<double>>(n * n * n, 0.0);
}

// c[i][j][k] with k fastest, matching the scenario file layout
void set_c(std::vector<std::complex<double>>& t, int dim, int i, int j, int k,
           std::complex<double> v) {
    t[(static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)) * dim +
      static_cast<std::size_t>(k)] = v;
}

double isometry_defect(const PartialIsometry& map, int pairs, std::uint64_t seed) {
    const DomainSampler sampler = domain_sampler_of(map);
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < pairs; ++s) {
        const Element f = sampler.draw(rng);
        const Element g = sampler.draw(rng);
        worst = std::max(worst, std::abs(norm(map.forward(f) - map.forward(g)) - norm(f - g)));
    }
    return worst;
}

void self_check(PartialIsometry& map, bool claims_isometric, int pairs = 1000,
                std::uint64_t seed = 0xf1c5) {
    map.measured_isometry_defect = isometry_defect(map, pairs, seed);
    if (claims_isometric && map.measured_isometry_defect > 1e-9)
        throw FixtureSelfCheckFailed("map '" + map.name + "' advertised as isometric but deviates by " +
                                     std::to_string(map.measured_isometry_defect));
}

} // namespace

AlgebraPtr make_matrix_algebra(int n) {
    if (n < 1) throw IncompatibleSpec("matrix algebra needs n >= 1");
    const int dim = n * n;
    auto tensor = zero_tensor(dim);
    // E_ij E_kl = delta_jk E_il, basis index of E_ij is i*n + j
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                set_c(tensor, dim, i * n + j, j * n + l, i * n + l, 1.0);

    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < n; ++i) unit(i * n + i) = 1.0;

    std::vector<Eigen::MatrixXcd> embedding;
    embedding.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
            e(i, j) = 1.0;
            embedding.push_back(std::move(e));
        }

    ValidationOptions opt;
    opt.connected_certificate = true;  // GL_n(C) is path-connected
    opt.name = "M" + std::to_string(n);
    return validate_algebra(dim, tensor, unit, NormRule::MatrixOperator, embedding, opt);
}

AlgebraPtr make_function_algebra(int k) {
    if (k < 1) throw IncompatibleSpec("function algebra needs k >= 1");
    auto tensor = zero_tensor(k);
    for (int i = 0; i < k; ++i) set_c(tensor, k, i, i, i, 1.0);
    ValidationOptions opt;
    opt.connected_certificate = true;  // invertible group is (C*)^k
    opt.name = "C" + std::to_string(k);
    return validate_algebra(k, tensor, Eigen::VectorXcd::Ones(k), NormRule::Sup, {}, opt);
}

std::pair<AlgebraPtr, AlgebraPtr> make_unitization_pair() {
    const int dim = 4;  // basis {I, E12, E13, E23}
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(dim);
    unit(0) = 1.0;

    std::vector<Eigen::MatrixXcd> embedding(4, Eigen::MatrixXcd::Zero(3, 3));
    embedding[0] = Eigen::MatrixXcd::Identity(3, 3);
    embedding[1](0, 1) = 1.0;
    embedding[2](0, 2) = 1.0;
    embedding[3](1, 2) = 1.0;

    // shared unitization part: I e_i = e_i I = e_i
    auto base_tensor = zero_tensor(dim);
    for (int i = 0; i < dim; ++i) {
        set_c(base_tensor, dim, 0, i, i, 1.0);
        if (i > 0) set_c(base_tensor, dim, i, 0, i, 1.0);
    }

    auto tensor_a = base_tensor;  // zero product on the strictly-upper part

    auto tensor_b = base_tensor;  // matrix product: E12 E23 = E13
    set_c(tensor_b, dim, 1, 3, 2, 1.0);

    ValidationOptions opt;
    opt.connected_certificate = true;  // invertible group is {alpha != 0}, connected
    opt.name = "unitization_zero";
    AlgebraPtr a = validate_algebra(dim, tensor_a, unit, NormRule::MatrixOperator, embedding, opt);
    opt.name = "unitization_matrix";
    AlgebraPtr b = validate_algebra(dim, tensor_b, unit, NormRule::MatrixOperator, embedding, opt);
    return {std::move(a), std::move(b)};
}

Element element_from_matrix(const AlgebraPtr& matrix_algebra, const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    if (matrix_algebra->dim() != n * n)
        throw IncompatibleSpec("matrix shape does not match algebra dimension");
    Eigen::VectorXcd coords(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) coords(i * n + j) = m(i, j);
    return matrix_algebra->element(std::move(coords));
}

Eigen::MatrixXcd matrix_from_element(const Element& a) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(a.algebra()->dim()))));
    if (n * n != a.algebra()->dim()) throw IncompatibleSpec("element does not live in a matrix algebra");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a.coords()(i * n + j);
    return m;
}

PartialIsometry make_two_ball_map() {
    AlgebraPtr cxy = make_function_algebra(2);
    Eigen::VectorXcd f0(2);
    f0 << 0.0, 10.0;
    const Element center0 = cxy->zero();
    const Element center1 = cxy->element(f0);

    PartialIsometry map;
    map.source = cxy;
    map.target = cxy;
    map.domain = UnionOfBalls{{Ball{center0, 1.0}, Ball{center1, 1.0}}};
    map.name = "two_ball";
    map.forward = [cxy, center1](const Element& f) {
        if (norm(f) < 1.0) {
            Eigen::VectorXcd c = f.coords();
            c(0) = -c(0);
            return cxy->element(std::move(c));
        }
        if (norm(f - center1) < 1.0) return f;
        throw DomainViolation("two-ball map evaluated outside its two balls");
    };
    map.inverse = map.forward;  // the flip is an involution, the identity part too

    self_check(map, true, 10000);
    return map;
}

PartialIsometry make_identity_map(AlgebraPtr source, AlgebraPtr target, std::string name) {
    if (source->dim() != target->dim())
        throw IncompatibleSpec("identity map needs equal coordinate dimensions");
    PartialIsometry map;
    map.source = source;
    map.target = target;
    map.forward = [target](const Element& a) { return target->element(a.coords()); };
    map.inverse = [source](const Element& b) { return source->element(b.coords()); };
    map.claims_group_homomorphism = source == target;
    map.claims_unital = (source->unit_coords() - target->unit_coords()).cwiseAbs().maxCoeff() < 1e-15;
    map.name = std::move(name);
    self_check(map, true);
    return map;
}

PartialIsometry make_translation_map(AlgebraPtr algebra, const Element& u) {
    PartialIsometry map;
    map.source = algebra;
    map.target = algebra;
    const Element shift = u;
    map.forward = [shift](const Element& a) { return a + shift; };
    map.inverse = [shift](const Element& b) { return b - shift; };
    map.name = "translation";
    self_check(map, true);
    return map;
}

PartialIsometry make_similarity_map(const AlgebraPtr& matrix_algebra, const Eigen::MatrixXcd& u,
                                    IsometryForm form, bool claims_isometric) {
    const Eigen::MatrixXcd u_inv = u.fullPivLu().inverse();
    PartialIsometry map;
    map.source = matrix_algebra;
    map.target = matrix_algebra;
    map.forward = [matrix_algebra, u, u_inv, form](const Element& a) {
        return element_from_matrix(matrix_algebra, u * apply_form(form, matrix_from_element(a)) * u_inv);
    };
    map.inverse = [matrix_algebra, u, u_inv, form](const Element& b) {
        return element_from_matrix(matrix_algebra,
                                   apply_form(form, u_inv * matrix_from_element(b) * u));
    };
    map.claims_group_homomorphism =
        form == IsometryForm::SimilarityLinear || form == IsometryForm::SimilarityConjugate;
    map.claims_unital = true;
    map.name = std::string("similarity_") + to_string(form);
    self_check(map, claims_isometric);
    return map;
}

PartialIsometry make_coordinate_permutation_map(const AlgebraPtr& function_algebra,
                                                std::vector<int> permutation,
                                                const Eigen::VectorXcd& unimodular_factor) {
    const int k = function_algebra->dim();
    if (permutation.empty()) {
        permutation.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) permutation[static_cast<std::size_t>(i)] = k - 1 - i;
    }
    if (static_cast<int>(permutation.size()) != k)
        throw IncompatibleSpec("permutation length does not match algebra dimension");
    std::vector<int> inverse_perm(permutation.size());
    std::vector<bool> seen(permutation.size(), false);
    for (int i = 0; i < k; ++i) {
        const int p = permutation[static_cast<std::size_t>(i)];
        if (p < 0 || p >= k || seen[static_cast<std::size_t>(p)])
            throw IncompatibleSpec("not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
        inverse_perm[static_cast<std::size_t>(p)] = i;
    }
    Eigen::VectorXcd factor = unimodular_factor;
    if (factor.size() == 0) factor = Eigen::VectorXcd::Ones(k);
    if (factor.size() != k) throw IncompatibleSpec("factor length does not match algebra dimension");
    for (int i = 0; i < k; ++i)
        if (std::abs(std::abs(factor(i)) - 1.0) > 1e-12)
            throw IncompatibleSpec("left factor must have unimodular coordinates to stay isometric");

    PartialIsometry map;
    map.source = function_algebra;
    map.target = function_algebra;
    map.forward = [function_algebra, permutation, factor](const Element& a) {
        Eigen::VectorXcd out(a.coords().size());
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out(i) = factor(i) * a.coords()(permutation[static_cast<std::size_t>(i)]);
        return function_algebra->element(std::move(out));
    };
    map.inverse = [function_algebra, inverse_perm, factor, permutation](const Element& b) {
        Eigen::VectorXcd out(b.coords().size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            const auto j = static_cast<Eigen::Index>(inverse_perm[static_cast<std::size_t>(i)]);
            out(i) = b.coords()(j) / factor(j);
        }
        return function_algebra->element(std::move(out));
    };
    const bool unital = (factor - Eigen::VectorXcd::Ones(k)).cwiseAbs().maxCoeff() < 1e-15;
    map.claims_group_homomorphism = unital;
    map.claims_unital = unital;
    map.name = "coordinate_permutation";
    self_check(map, true);
    return map;
}

AlgebraPtr build_algebra(const AlgebraDesc& desc) {
    switch (desc.kind) {
        case AlgebraDesc::Kind::Matrix: return make_matrix_algebra(desc.n);
        case AlgebraDesc::Kind::Function: return make_function_algebra(desc.n);
        case AlgebraDesc::Kind::UnitizationZero: return make_unitization_pair().first;
        case AlgebraDesc::Kind::UnitizationMatrix: return make_unitization_pair().second;
        case AlgebraDesc::Kind::Custom: {
            ValidationOptions opt;
            opt.name = "custom";
            try {
                return validate_algebra(desc.dim, desc.structure_constants, desc.unit, desc.rule,
                                        desc.embedding, opt);
            } catch (const Error& err) {
                throw FixtureSelfCheckFailed(std::string("custom algebra rejected: ") + err.what());
            }
        }
    }
    throw IncompatibleSpec("unknown algebra descriptor");
}

namespace {

bool same_desc(const AlgebraDesc& a, const AlgebraDesc& b) {
    return a.kind == b.kind && a.kind != AlgebraDesc::Kind::Custom && a.n == b.n;
}

} // namespace

PartialIsometry make_map(const ScenarioSpec& spec) {
    AlgebraPtr source = build_algebra(spec.source);
    AlgebraPtr target = same_desc(spec.source, spec.target) ? source : build_algebra(spec.target);

    switch (spec.map_kind) {
        case MapKind::Identity:
            return make_identity_map(source, target);
        case MapKind::UnitizationIdentity: {
            if (spec.source.kind != AlgebraDesc::Kind::UnitizationZero ||
                spec.target.kind != AlgebraDesc::Kind::UnitizationMatrix)
                throw IncompatibleSpec("unitization_identity requires the unitization pair");
            return make_identity_map(source, target, "unitization_identity");
        }
        case MapKind::TranslationByRadical: {
            const Element u = target->element(spec.translation_coords);
            if (distance_to_radical(u, dickson_radical(target)) > 1e-9)
                throw IncompatibleSpec(
                    "translation element is not in the radical; b + u would leave the group");
            return make_translation_map(target, u);
        }
        case MapKind::Similarity: {
            if (spec.source.kind != AlgebraDesc::Kind::Matrix)
                throw IncompatibleSpec("similarity maps live on matrix algebras");
            return make_similarity_map(source, spec.similarity_u, spec.similarity_form,
                                       spec.claims_isometric);
        }
        case MapKind::SwapCoordinates: {
            if (spec.source.kind != AlgebraDesc::Kind::Function)
                throw IncompatibleSpec("coordinate maps live on function algebras");
            return make_coordinate_permutation_map(source, spec.permutation, spec.unimodular_factor);
        }
        case MapKind::TwoBall: {
            if (spec.source.kind != AlgebraDesc::Kind::Function || spec.source.n != 2)
                throw IncompatibleSpec("the two-ball scenario requires C({x,y})");
            return make_two_ball_map();
        }
        case MapKind::CustomTable: {
            if (spec.table.empty()) throw IncompatibleSpec("custom_table needs at least one pair");
            std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> table = spec.table;
            PartialIsometry map;
            map.source = source;
            map.target = target;
            map.domain = SubgroupDescriptor::custom([source, table](const Element& a) {
                for (const auto& [in, out] : table)
                    if ((a.coords() - in).cwiseAbs().maxCoeff() <= 1e-12) return true;
                return false;
            });
            map.forward = [target, table](const Element& a) {
                for (const auto& [in, out] : table)
                    if ((a.coords() - in).cwiseAbs().maxCoeff() <= 1e-12) return target->element(out);
                throw DomainViolation("input not present in the lookup table");
            };
            map.name = "custom_table";
            return map;
        }
    }
    throw IncompatibleSpec("unknown map kind");
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
    }
    return q;
}

Eigen::MatrixXcd random_conditioned(int n, double cond, Rng& rng) {
    const Eigen::MatrixXcd q1 = random_unitary(n, rng);
    const Eigen::MatrixXcd q2 = random_unitary(n, rng);
    Eigen::VectorXd sv(n);
    const double half = 0.5 * std::log(cond);
    for (Eigen::Index i = 0; i < n; ++i) sv(i) = std::exp(rng.uniform(-half, half));
    return q1 * sv.asDiagonal() * q2;
}

} // namespace isolab
