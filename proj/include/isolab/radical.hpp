#pragma once

#include "isolab/algebra.hpp"
#include "isolab/rng.hpp"

#include <optional>
#include <vector>

namespace isolab {

/// Basis of the Jacobson radical, from the trace-form nullspace.
struct RadicalBasis {
    std::vector<Element> basis;
    int dim_radical = 0;
    Eigen::MatrixXcd span;  // dim x dim_radical, orthonormal columns
};

/// Nullspace of G[i][j] = trace(L_{e_i e_j}). For finite-dimensional algebras
/// over a characteristic-zero field this equals the Jacobson radical.
RadicalBasis dickson_radical(const AlgebraPtr& algebra);

/// Distance (in the algebra norm) from a to the radical span.
double distance_to_radical(const Element& a, const RadicalBasis& radical);

/// Draws elements of the principal component as products of two exponentials.
class PrincipalComponentSampler {
public:
    PrincipalComponentSampler(AlgebraPtr algebra, std::uint64_t seed, double scale = 0.7)
        : algebra_(std::move(algebra)), rng_(seed), scale_(scale) {}
    Element next();
    const AlgebraPtr& algebra() const { return algebra_; }

private:
    AlgebraPtr algebra_;
    Rng rng_;
    double scale_;
};

enum class RadicalVerdictKind { ConsistentWithRadical, NotRadical };

struct RadicalVerdict {
    RadicalVerdictKind kind = RadicalVerdictKind::ConsistentWithRadical;
    std::optional<Element> witness;   // b with r(b a) above threshold
    double witness_radius = 0.0;
};

/// Spectral route of the radical criterion: a is declared NotRadical as soon
/// as some sampled b in the principal component gives r(b a) > threshold.
RadicalVerdict radical_test_spectral(const Element& a, PrincipalComponentSampler& sampler, int trials,
                                     double threshold = 1e-6);

/// sup { Im z : z in W(b) }, evaluated as the infimum of
/// t^-1 (||e - i t b|| - 1) over a logarithmic grid t in [2^-40, 2^4] with
/// golden-section refinement near the minimum. The norm difference is
/// computed cancellation-free so the small-t end of the grid stays accurate.
double sup_im_numrange(const Element& b);

/// Numerical radius ||b||_W: max of sup_im_numrange(e^{i theta} b) over a
/// uniform direction grid, doubled until the value changes by < 1e-6.
double numerical_radius(const Element& b, int directions = 8);

/// ||b|| <= e * ||b||_W + 1e-6. Since direction refinement only raises the
/// lower bound, the loop exits as soon as the inequality is certified.
bool check_norm_numradius(const Element& b);

} // namespace isolab
