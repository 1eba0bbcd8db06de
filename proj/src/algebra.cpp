#include "isolab/algebra.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/rng.hpp"

#include <Eigen/SVD>
#include <sstream>

namespace isolab {

namespace {

std::string fmt_complex(std::complex<double> z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

} // namespace

Element::Element(AlgebraPtr algebra, Eigen::VectorXcd coords)
    : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    if (coords_.size() != algebra_->dim())
        throw AlgebraMismatch("coordinate vector length " + std::to_string(coords_.size()) +
                              " does not match algebra dimension " + std::to_string(algebra_->dim()));
}

Element Element::operator+(const Element& other) const {
    if (algebra_ != other.algebra_) throw AlgebraMismatch("addition across distinct algebras");
    return Element(algebra_, coords_ + other.coords_);
}

Element Element::operator-(const Element& other) const {
    if (algebra_ != other.algebra_) throw AlgebraMismatch("subtraction across distinct algebras");
    return Element(algebra_, coords_ - other.coords_);
}

Element Element::operator-() const { return Element(algebra_, -coords_); }

Element Element::operator*(const Element& other) const { return mul(*this, other); }

Element operator*(std::complex<double> s, const Element& a) {
    return Element(a.algebra(), s * a.coords());
}

Element operator*(double s, const Element& a) { return std::complex<double>(s, 0.0) * a; }

Algebra::Algebra(Tag, int dim, std::vector<Eigen::MatrixXcd> left_basis, Eigen::VectorXcd unit_coords,
                 NormRule rule, std::vector<Eigen::MatrixXcd> embedding_basis, bool connected,
                 std::string name)
    : dim_(dim),
      left_basis_(std::move(left_basis)),
      unit_coords_(std::move(unit_coords)),
      norm_rule_(rule),
      embedding_basis_(std::move(embedding_basis)),
      connected_certificate_(connected),
      name_(std::move(name)) {}

Eigen::MatrixXcd Algebra::embed(const Element& a) const {
    if (!has_embedding()) throw MissingEmbedding("algebra '" + name_ + "' has no concrete embedding");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(embedding_basis_[0].rows(), embedding_basis_[0].cols());
    for (int i = 0; i < dim_; ++i) m += a.coords()(i) * embedding_basis_[static_cast<std::size_t>(i)];
    return m;
}

Element Algebra::element(Eigen::VectorXcd coords) const {
    return Element(shared_from_this(), std::move(coords));
}

Element Algebra::zero() const { return element(Eigen::VectorXcd::Zero(dim_)); }

Element Algebra::unit() const { return element(unit_coords_); }

Element Algebra::basis_element(int i) const {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim_);
    c(i) = 1.0;
    return element(std::move(c));
}

double Algebra::commutativity_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            worst = std::max(worst, (left_basis_[static_cast<std::size_t>(i)].col(j) -
                                     left_basis_[static_cast<std::size_t>(j)].col(i))
                                        .cwiseAbs()
                                        .maxCoeff());
    return worst;
}

AlgebraPtr validate_algebra(int dim, const std::vector<std::complex<double>>& structure_constants,
                            const Eigen::VectorXcd& unit_coords, NormRule rule,
                            const std::vector<Eigen::MatrixXcd>& embedding_basis,
                            const ValidationOptions& options) {
    if (dim < 1) throw BadUnit("dimension must be >= 1");
    const auto n = static_cast<std::size_t>(dim);
    if (structure_constants.size() != n * n * n)
        throw ParseError("structure tensor has " + std::to_string(structure_constants.size()) +
                         " entries, expected dim^3 = " + std::to_string(n * n * n));
    if (unit_coords.size() != dim) throw BadUnit("unit coordinate length does not match dimension");

    // left_basis[i](k, j) = c[i][j][k]
    std::vector<Eigen::MatrixXcd> left_basis(n, Eigen::MatrixXcd::Zero(dim, dim));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                left_basis[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                    structure_constants[(i * n + j) * n + k];

    // associativity: (e_i e_j) e_k = e_i (e_j e_k)
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const Eigen::VectorXcd eij = left_basis[static_cast<std::size_t>(i)].col(j);
            for (int k = 0; k < dim; ++k) {
                Eigen::VectorXcd lhs = Eigen::VectorXcd::Zero(dim);
                for (int m = 0; m < dim; ++m) lhs += eij(m) * left_basis[static_cast<std::size_t>(m)].col(k);
                const Eigen::VectorXcd rhs =
                    left_basis[static_cast<std::size_t>(i)] * left_basis[static_cast<std::size_t>(j)].col(k);
                const double err = (lhs - rhs).cwiseAbs().maxCoeff();
                if (err > options.structural_tol) {
                    std::ostringstream os;
                    os << "(e" << i << " e" << j << ") e" << k << " != e" << i << " (e" << j << " e" << k
                       << "), coordinate deviation " << err;
                    throw NonAssociative(os.str());
                }
            }
        }

    // unit law, both sides
    Eigen::MatrixXcd left_unit = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) left_unit += unit_coords(i) * left_basis[static_cast<std::size_t>(i)];
    if ((left_unit - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > options.structural_tol)
        throw BadUnit("e*a != a: left multiplication by the declared unit is not the identity");
    for (int i = 0; i < dim; ++i) {
        const Eigen::VectorXcd ei_unit = left_basis[static_cast<std::size_t>(i)] * unit_coords;
        Eigen::VectorXcd ei = Eigen::VectorXcd::Zero(dim);
        ei(i) = 1.0;
        if ((ei_unit - ei).cwiseAbs().maxCoeff() > options.structural_tol)
            throw BadUnit("a*e != a for basis element " + std::to_string(i));
    }

    if (rule == NormRule::MatrixOperator) {
        if (embedding_basis.size() != n)
            throw MissingEmbedding("matrix_operator norm requires one embedding matrix per basis element");
        // embedding must be linear-injective and unital
        const auto rows = embedding_basis[0].rows(), cols = embedding_basis[0].cols();
        Eigen::MatrixXcd stacked(rows * cols, dim);
        Eigen::MatrixXcd unit_image = Eigen::MatrixXcd::Zero(rows, cols);
        for (std::size_t i = 0; i < n; ++i) {
            if (embedding_basis[i].rows() != rows || embedding_basis[i].cols() != cols)
                throw MissingEmbedding("embedding matrices have inconsistent shapes");
            stacked.col(static_cast<Eigen::Index>(i)) =
                Eigen::Map<const Eigen::VectorXcd>(embedding_basis[i].data(), rows * cols);
            unit_image += unit_coords(static_cast<Eigen::Index>(i)) * embedding_basis[i];
        }
        if ((unit_image - Eigen::MatrixXcd::Identity(rows, cols)).cwiseAbs().maxCoeff() > options.structural_tol)
            throw BadUnit("concrete embedding does not send the unit to the identity matrix");
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
        if (svd.singularValues()(dim - 1) < 1e-10 * svd.singularValues()(0))
            throw MissingEmbedding("concrete embedding is not injective; induced norm would degenerate");
    }

    auto algebra = std::make_shared<Algebra>(Algebra::Tag{}, dim, std::move(left_basis), unit_coords, rule,
                                             embedding_basis, options.connected_certificate, options.name);

    // ||e|| = 1 and sampled submultiplicativity
    const double unit_norm = norm(algebra->unit());
    if (std::abs(unit_norm - 1.0) > options.analytic_tol)
        throw NormNotSubmultiplicative("||e|| = " + std::to_string(unit_norm) + ", expected 1");
    Rng rng(options.seed);
    for (int s = 0; s < options.norm_samples; ++s) {
        const Element a = random_element(algebra, rng);
        const Element b = random_element(algebra, rng);
        const double lhs = norm(mul(a, b));
        const double rhs = norm(a) * norm(b);
        if (lhs > rhs + options.analytic_tol * std::max(1.0, rhs)) {
            std::ostringstream os;
            os << "||ab|| = " << lhs << " > ||a||*||b|| = " << rhs << " at sample " << s << "; a0 = "
               << fmt_complex(a.coords()(0)) << ", b0 = " << fmt_complex(b.coords()(0));
            throw NormNotSubmultiplicative(os.str());
        }
    }
    return algebra;
}

Element mul(const Element& a, const Element& b) {
    if (a.algebra() != b.algebra()) throw AlgebraMismatch("product across distinct algebras");
    return a.algebra()->element(regular_rep(a) * b.coords());
}

Eigen::MatrixXcd regular_rep(const Element& a) {
    const auto& alg = *a.algebra();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(alg.dim(), alg.dim());
    for (int i = 0; i < alg.dim(); ++i) m += a.coords()(i) * alg.left_basis(i);
    return m;
}

double norm(const Element& a) {
    switch (a.algebra()->norm_rule()) {
        case NormRule::Sup:
            return a.coords().size() == 0 ? 0.0 : a.coords().cwiseAbs().maxCoeff();
        case NormRule::MatrixOperator:
            return linalg::spectral_norm(a.algebra()->embed(a));
        case NormRule::RegularRepOperator:
            return linalg::spectral_norm(regular_rep(a));
    }
    return 0.0;
}

Element random_element(const AlgebraPtr& algebra, Rng& rng, double scale) {
    Eigen::VectorXcd c(algebra->dim());
    for (int i = 0; i < algebra->dim(); ++i) c(i) = scale * rng.cnormal();
    return algebra->element(std::move(c));
}

} // namespace isolab
