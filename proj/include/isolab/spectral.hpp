#pragma once

#include "isolab/algebra.hpp"

#include <functional>

namespace isolab {

enum class SubgroupKind { FullInvertibleGroup, PrincipalComponent, CustomPredicate };

/// Describes the open subgroup an isometry is defined on.
struct SubgroupDescriptor {
    SubgroupKind kind = SubgroupKind::FullInvertibleGroup;
    std::function<bool(const Element&)> predicate;  // CustomPredicate only

    static SubgroupDescriptor full() { return {SubgroupKind::FullInvertibleGroup, {}}; }
    static SubgroupDescriptor principal() { return {SubgroupKind::PrincipalComponent, {}}; }
    static SubgroupDescriptor custom(std::function<bool(const Element&)> p) {
        return {SubgroupKind::CustomPredicate, std::move(p)};
    }
};

struct SpectrumResult {
    Eigen::VectorXcd eigenvalues;  // of the left regular representation, with multiplicity
    double spectral_radius = 0.0;
};

/// True when L_a passes the rank test (smallest singular value above
/// 1e-12 * ||L_a||).
bool is_invertible(const Element& a);

/// Two-sided inverse, computed by solving L_a x = e. Throws NotInvertible when
/// L_a is singular or the residual check ||a a^-1 - e|| <= 1e-9 fails.
Element invert(const Element& a);

SpectrumResult spectrum(const Element& a);

/// ||a^k_max||^(1/k_max) by repeated squaring; k_max a power of two <= 1024.
/// Rescales and retries once if an intermediate norm exceeds 1e300.
double gelfand_radius(const Element& a, int k_max);

bool in_subgroup(const Element& a, const SubgroupDescriptor& d);

/// Samples witnesses from the principal component and verifies that the
/// descriptor's membership set is closed under products and inverses, as a
/// subgroup must be. Returns false with the first violating sample otherwise.
bool check_subgroup_closure(const AlgebraPtr& algebra, const SubgroupDescriptor& d, int samples,
                            std::uint64_t seed);

/// Membership in Omega_A = { a : ||a - r e|| < r for some r > 0 }, decided by
/// minimising ||a - r e|| - r over a logarithmic grid in r with golden-section
/// refinement.
bool in_omega(const Element& a);

/// exp(a), via the matrix exponential of L_a applied to the unit coordinates.
Element exp_element(const Element& a);

} // namespace isolab
