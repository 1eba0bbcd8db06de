#include "isolab/radical.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/spectral.hpp"

#include <cmath>

namespace isolab {

RadicalBasis dickson_radical(const AlgebraPtr& algebra) {
    const int n = algebra->dim();
    Eigen::MatrixXcd gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // trace(L_{e_i e_j}) = sum_m (e_i e_j)_m trace(L_{e_m})
            const Eigen::VectorXcd prod = algebra->left_basis(i).col(j);
            std::complex<double> tr = 0.0;
            for (int m = 0; m < n; ++m) tr += prod(m) * algebra->left_basis(m).trace();
            gram(i, j) = tr;
        }
    RadicalBasis out;
    out.span = linalg::nullspace(gram);
    out.dim_radical = static_cast<int>(out.span.cols());
    out.basis.reserve(static_cast<std::size_t>(out.dim_radical));
    for (int c = 0; c < out.dim_radical; ++c) out.basis.push_back(algebra->element(out.span.col(c)));
    return out;
}

double distance_to_radical(const Element& a, const RadicalBasis& radical) {
    if (radical.dim_radical == 0) return norm(a);
    // orthogonal projection in coordinates, distance reported in the algebra norm
    const Eigen::VectorXcd residual = a.coords() - radical.span * (radical.span.adjoint() * a.coords());
    return norm(a.algebra()->element(residual));
}

Element PrincipalComponentSampler::next() {
    const Element x = random_element(algebra_, rng_, scale_);
    const Element y = random_element(algebra_, rng_, scale_);
    return mul(exp_element(x), exp_element(y));
}

RadicalVerdict radical_test_spectral(const Element& a, PrincipalComponentSampler& sampler, int trials,
                                     double threshold) {
    for (int t = 0; t < trials; ++t) {
        const Element b = sampler.next();
        const double r = spectrum(mul(b, a)).spectral_radius;
        if (r > threshold) return {RadicalVerdictKind::NotRadical, b, r};
    }
    return {RadicalVerdictKind::ConsistentWithRadical, std::nullopt, 0.0};
}

namespace {

// Cancellation-free evaluation of h(t) = t^-1 (||e - i t b|| - 1).
//
// Sup norm: per coordinate, |1 - i t b_j| - 1 = t (2 Im b_j + t |b_j|^2) / (1 + |1 - i t b_j|).
// Operator norms with unital embedding e -> I: for M = I - i t B,
// M*M = I + t H(t) with H(t) = i(B* - B) + t B*B Hermitian, so
// ||M|| = sqrt(1 + t q), q = lambda_max(H(t)), and h(t) = q / (1 + ||M||).
class NormDefectEvaluator {
public:
    explicit NormDefectEvaluator(const Element& b) : rule_(b.algebra()->norm_rule()) {
        if (rule_ == NormRule::Sup) {
            coords_ = b.coords();
        } else {
            const Eigen::MatrixXcd m =
                rule_ == NormRule::MatrixOperator ? b.algebra()->embed(b) : regular_rep(b);
            p_ = std::complex<double>(0, 1) * (m.adjoint() - m);
            r_ = m.adjoint() * m;
        }
    }

    double h(double t) const {
        if (rule_ == NormRule::Sup) {
            double best = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < coords_.size(); ++j) {
                const std::complex<double> bj = coords_(j);
                const double num = 2.0 * bj.imag() + t * std::norm(bj);
                const double mag = std::abs(std::complex<double>(1.0, 0.0) -
                                            std::complex<double>(0.0, t) * bj);
                best = std::max(best, num / (1.0 + mag));
            }
            return best;
        }
        const double q = linalg::lambda_max_hermitian(p_ + t * r_);
        const double nrm = std::sqrt(1.0 + t * q);
        return q / (1.0 + nrm);
    }

private:
    NormRule rule_;
    Eigen::VectorXcd coords_;
    Eigen::MatrixXcd p_, r_;
};

double infimum_over_t(const NormDefectEvaluator& ev) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -40;
    for (int j = -40; j <= 4; ++j) {
        const double v = ev.h(std::ldexp(1.0, j));
        if (v < best) { best = v; best_j = j; }
    }
    // refine in log t between the grid neighbours of the minimum
    const double phi = 0.6180339887498949;
    const double ln2 = std::log(2.0);
    double lo = (best_j - 1) * ln2, hi = (best_j + 1) * ln2;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = ev.h(std::exp(x1)), f2 = ev.h(std::exp(x2));
    for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = ev.h(std::exp(x1));
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = ev.h(std::exp(x2));
        }
    }
    return std::min({best, f1, f2});
}

} // namespace

double sup_im_numrange(const Element& b) { return infimum_over_t(NormDefectEvaluator(b)); }

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double rotated_sup_im(const Element& b, double theta) {
    const std::complex<double> i_unit(0.0, 1.0);
    return sup_im_numrange(std::exp(i_unit * theta) * b);
}

struct GridMax {
    double value = -std::numeric_limits<double>::infinity();
    double theta = 0.0;
};

// evaluates only the directions not covered by the previous doubling
GridMax direction_grid_max(const Element& b, int directions, int start_at, GridMax carry) {
    for (int k = start_at; k < directions; k += (start_at == 0 ? 1 : 2)) {
        const double theta = kTwoPi * k / directions;
        const double v = rotated_sup_im(b, theta);
        if (v > carry.value) carry = {v, theta};
    }
    return carry;
}

// Doubling of the direction grid until the max moves by < 1e-6, then a
// golden-section polish around the winning direction (the grid max alone can
// plateau across one doubling without being converged). `target`, when given,
// short-circuits as soon as the monotone lower bound m_d certifies it.
double radius_by_doubling(const Element& b, int directions, const double* target) {
    GridMax m = direction_grid_max(b, directions, 0, GridMax{});
    while (true) {
        if (target && m.value >= *target) return m.value;
        const int doubled = directions * 2;
        const GridMax m2 = direction_grid_max(b, doubled, 1, m);
        const bool settled = std::abs(m2.value - m.value) < 1e-6 && doubled >= 64;
        m = m2;
        directions = doubled;
        if (settled || directions > (1 << 16)) break;
    }
    const double phi = 0.6180339887498949;
    double lo = m.theta - kTwoPi / directions, hi = m.theta + kTwoPi / directions;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = rotated_sup_im(b, x1), f2 = rotated_sup_im(b, x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 >= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = rotated_sup_im(b, x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = rotated_sup_im(b, x2);
        }
    }
    return std::max({m.value, f1, f2});
}

} // namespace

double numerical_radius(const Element& b, int directions) {
    if (directions < 8) directions = 8;
    return radius_by_doubling(b, directions, nullptr);
}

bool check_norm_numradius(const Element& b) {
    const double nb = norm(b);
    if (nb <= 1e-6) return true;
    const double target = (nb - 1e-6) / 2.718281828459045235360287471353;
    return radius_by_doubling(b, 8, &target) >= target;
}

} // namespace isolab
