#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace isolab {

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// How the algebra norm is evaluated.
///   Sup              - sup of |coordinates| (function algebras over finite sets)
///   MatrixOperator   - largest singular value of the concrete embedding
///   RegularRepOperator - largest singular value of the left-regular representation
enum class NormRule { Sup, MatrixOperator, RegularRepOperator };

/// Coordinate vector over the basis of a fixed algebra. Immutable.
class Element {
public:
    Element(AlgebraPtr algebra, Eigen::VectorXcd coords);

    const Eigen::VectorXcd& coords() const { return coords_; }
    const AlgebraPtr& algebra() const { return algebra_; }

    Element operator+(const Element& other) const;
    Element operator-(const Element& other) const;
    Element operator-() const;
    Element operator*(const Element& other) const;  // algebra product

private:
    AlgebraPtr algebra_;
    Eigen::VectorXcd coords_;
};

Element operator*(std::complex<double> s, const Element& a);
Element operator*(double s, const Element& a);

/// Finite-dimensional unital complex algebra given by structure constants
/// c[i][j][k] (e_i e_j = sum_k c[i][j][k] e_k), a unit vector and a norm rule.
/// Instances are produced by validate_algebra or the catalog constructors and
/// are immutable afterwards.
class Algebra : public std::enable_shared_from_this<Algebra> {
public:
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    NormRule norm_rule() const { return norm_rule_; }
    const Eigen::VectorXcd& unit_coords() const { return unit_coords_; }

    std::complex<double> structure_constant(int i, int j, int k) const {
        return left_basis_[static_cast<std::size_t>(i)](k, j);
    }
    /// Left multiplication matrix of basis element i.
    const Eigen::MatrixXcd& left_basis(int i) const { return left_basis_[static_cast<std::size_t>(i)]; }

    bool has_embedding() const { return !embedding_basis_.empty(); }
    int embedding_size() const { return embedding_basis_.empty() ? 0 : static_cast<int>(embedding_basis_[0].rows()); }
    const std::vector<Eigen::MatrixXcd>& embedding_basis() const { return embedding_basis_; }
    Eigen::MatrixXcd embed(const Element& a) const;

    /// True when the catalog certifies the invertible group is path-connected
    /// (so the principal component equals the whole group).
    bool invertible_group_connected() const { return connected_certificate_; }

    Element element(Eigen::VectorXcd coords) const;
    Element zero() const;
    Element unit() const;
    Element basis_element(int i) const;

    /// max |c[i][j][k] - c[j][i][k]| over all slots.
    double commutativity_residual() const;

    struct Tag {};  // construction restricted to validate_algebra
    Algebra(Tag, int dim, std::vector<Eigen::MatrixXcd> left_basis, Eigen::VectorXcd unit_coords,
            NormRule rule, std::vector<Eigen::MatrixXcd> embedding_basis, bool connected, std::string name);

private:
    int dim_;
    std::vector<Eigen::MatrixXcd> left_basis_;
    Eigen::VectorXcd unit_coords_;
    NormRule norm_rule_;
    std::vector<Eigen::MatrixXcd> embedding_basis_;
    bool connected_certificate_;
    std::string name_;
};

struct ValidationOptions {
    double structural_tol = 1e-12;   // associativity / unit identities
    double analytic_tol = 1e-9;      // sampled norm identities
    int norm_samples = 1000;
    std::uint64_t seed = 20240501;
    bool connected_certificate = false;
    std::string name = "custom";
};

/// Checks associativity, the unit law and sampled submultiplicativity, then
/// returns the algebra. Throws NonAssociative / BadUnit /
/// NormNotSubmultiplicative / MissingEmbedding with the first witness found.
AlgebraPtr validate_algebra(int dim, const std::vector<std::complex<double>>& structure_constants,
                            const Eigen::VectorXcd& unit_coords, NormRule rule,
                            const std::vector<Eigen::MatrixXcd>& embedding_basis = {},
                            const ValidationOptions& options = {});

/// Product in the algebra: coords = sum_{ij} a_i b_j c[i][j][.].
Element mul(const Element& a, const Element& b);

/// Left multiplication operator L_a in coordinates.
Eigen::MatrixXcd regular_rep(const Element& a);

/// Algebra norm of a, per the algebra's norm rule.
double norm(const Element& a);

/// Gaussian random element with the given coordinate scale.
Element random_element(const AlgebraPtr& algebra, class Rng& rng, double scale = 1.0);

} // namespace isolab
