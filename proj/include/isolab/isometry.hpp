#pragma once

#include "isolab/algebra.hpp"
#include "isolab/rng.hpp"
#include "isolab/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace isolab {

struct Ball {
    Element center;
    double radius;
};

/// Explicit open-set domain for maps that do not live on a subgroup
/// (the two-ball counterexample). Membership is strict inequality per ball.
struct UnionOfBalls {
    std::vector<Ball> balls;
    bool contains(const Element& a) const;
};

using Domain = std::variant<SubgroupDescriptor, UnionOfBalls>;

/// A map given pointwise on a described subset of an invertible group.
struct PartialIsometry {
    AlgebraPtr source;
    AlgebraPtr target;
    Domain domain = SubgroupDescriptor::full();
    std::function<Element(const Element&)> forward;
    std::function<Element(const Element&)> inverse;  // empty when unavailable
    bool claims_group_homomorphism = false;
    bool claims_unital = false;
    std::string name = "map";
    double measured_isometry_defect = 0.0;  // filled by the catalog self-check

    bool has_inverse() const { return static_cast<bool>(inverse); }
    bool domain_is_subgroup() const { return std::holds_alternative<SubgroupDescriptor>(domain); }
    bool domain_contains(const Element& a) const;
};

/// Draws in-domain points deterministically.
struct DomainSampler {
    AlgebraPtr algebra;
    std::function<Element(Rng&)> draw;
    std::function<bool(const Element&)> contains;
};

DomainSampler domain_sampler_of(const PartialIsometry& map);
DomainSampler full_space_sampler(AlgebraPtr algebra);

/// Largest rho such that x + 2||x||e and 2||x||e stay in the domain whenever
/// ||x|| <= rho. Infinite for subgroup domains (the shifted points lie in
/// Omega ⊂ the principal component).
double formula_safe_radius(const PartialIsometry& map);

/// u0 = lim_{a->0} T(a), from the sequence T(2^-k e), k = 10..30, with
/// one Richardson step at the tail. Throws NoLimit when the successive
/// differences fail to contract with ratio <= 0.9.
Element estimate_u0(const PartialIsometry& map);

/// Real-linear candidate extension: a 2dim x 2dim real matrix acting on
/// realified coordinates, plus the translation part u0.
struct LinearCandidate {
    AlgebraPtr source;
    AlgebraPtr target;
    Eigen::MatrixXd matrix_real;
    Element offset;  // u0

    Element apply(const Element& a) const;              // the linear part
    Element apply_with_offset(const Element& a) const;  // linear part + u0
    Element apply_inverse(const Element& b) const;      // solve for the linear part
    /// Frobenius norm of M J - J M; zero iff the map is complex-linear.
    double complex_linearity_residual() const;
    bool is_complex_linear(double tol = 1e-8) const { return complex_linearity_residual() <= tol; }
    bool invertible(double rel_tol = 1e-10) const;
};

enum class ExtensionVerdict { ExtendsAsTheorem, FailsExtension };

struct FailureWitness {
    std::string check;  // which residual produced it
    Element a;
    std::optional<Element> b;
    double discrepancy = 0.0;
};

struct ExtensionReport {
    Element u0;
    bool u0_in_radical = false;
    double u0_radical_distance = 0.0;
    double additivity_residual = 0.0;
    double homogeneity_residual = 0.0;
    double isometry_residual = 0.0;
    double agreement_residual = 0.0;
    std::optional<double> surjectivity_probe_residual;  // empty = not probed
    ExtensionVerdict verdict = ExtensionVerdict::FailsExtension;
    std::optional<FailureWitness> witness;
    double tolerance = 1e-8;
};

/// The defining formula T0(a + 2||a||e) - T0(2||a||e). Requires the two
/// shifted points in the domain; throws DomainViolation otherwise (possible
/// only for union-of-balls domains).
Element formula_extension(const PartialIsometry& map, const Element& a);

/// Builds the candidate from realified basis directions at unit norm (or the
/// largest domain-safe scale) and fills every residual by fresh sampling.
std::pair<LinearCandidate, ExtensionReport> extend_isometry(const PartialIsometry& map, int samples,
                                                            std::uint64_t seed, double tol = 1e-8);

/// Residual audit of an already-assembled candidate against the map.
ExtensionReport verify_linear_isometry(const LinearCandidate& candidate, const PartialIsometry& map,
                                       int samples, std::uint64_t seed, double tol = 1e-8);

/// || T((f+g)/2) - (T(f)+T(g))/2 || after verifying the segment [f,g] stays
/// in the domain on a 64-point grid; throws SegmentLeavesDomain otherwise.
double midpoint_check(const PartialIsometry& map, const Element& f, const Element& g);

/// Fixed-point residual || T(c) - c || for a distance-preserving bijection
/// (given as an index permutation) of a finite set L that is symmetric under
/// z -> 2c - z. Throws NotSymmetric / NotIsometric when the preconditions
/// fail.
double reflection_fixed_point_check(const std::vector<Element>& points, const Element& c,
                                    const std::vector<std::size_t>& permutation);

} // namespace isolab
