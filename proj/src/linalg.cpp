#include "isolab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <vector>

namespace isolab::linalg {

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

namespace {

// Permutation phase of gebal: push rows that are zero off-diagonal to the
// bottom and columns that are zero off-diagonal to the top. The diagonal
// entries moved out are exact eigenvalues.
struct BalanceResult {
    Eigen::MatrixXcd active;           // middle block after isolation
    std::vector<std::complex<double>> isolated;
};

BalanceResult isolate_eigenvalues(Eigen::MatrixXcd m) {
    const Eigen::Index n = m.rows();
    BalanceResult out;
    Eigen::Index lo = 0, hi = n;  // active window [lo, hi)

    auto swap_rc = [&](Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        m.row(i).swap(m.row(j));
        m.col(i).swap(m.col(j));
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // row with all-zero off-diagonal entries inside the window -> bottom
        for (Eigen::Index i = lo; i < hi; ++i) {
            bool zero = true;
            for (Eigen::Index j = lo; j < hi; ++j)
                if (j != i && m(i, j) != 0.0) { zero = false; break; }
            if (zero) {
                swap_rc(i, hi - 1);
                out.isolated.push_back(m(hi - 1, hi - 1));
                --hi;
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // column with all-zero off-diagonal entries inside the window -> top
        for (Eigen::Index j = lo; j < hi; ++j) {
            bool zero = true;
            for (Eigen::Index i = lo; i < hi; ++i)
                if (i != j && m(i, j) != 0.0) { zero = false; break; }
            if (zero) {
                swap_rc(j, lo);
                out.isolated.push_back(m(lo, lo));
                ++lo;
                changed = true;
                break;
            }
        }
    }
    out.active = m.block(lo, lo, hi - lo, hi - lo);
    return out;
}

// Parlett-Reinsch diagonal scaling with radix-2 factors (exact similarity).
void scale_in_place(Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    const double radix = 2.0, radix2 = 4.0;
    bool converged = false;
    int sweeps = 0;
    while (!converged && sweeps++ < 50) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0, r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(m(j, i));
                r += std::abs(m(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / radix) { c *= radix2; r /= radix2; f *= radix; }
            while (c >= r * radix) { c /= radix2; r *= radix2; f /= radix; }
            if ((c + r) < 0.95 * s && f != 1.0) {
                converged = false;
                m.col(i) *= f;
                m.row(i) /= f;
            }
        }
    }
}

} // namespace

Eigen::VectorXcd balanced_eigenvalues(const Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    BalanceResult b = isolate_eigenvalues(m);
    Eigen::VectorXcd evs(n);
    Eigen::Index k = 0;
    for (const auto& ev : b.isolated) evs(k++) = ev;
    if (b.active.rows() > 0) {
        scale_in_place(b.active);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(b.active, false);
        for (Eigen::Index i = 0; i < b.active.rows(); ++i) evs(k++) = solver.eigenvalues()(i);
    }
    return evs;
}

double lambda_max_hermitian(const Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    if (n == 1) return h(0, 0).real();
    if (n == 2) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> s;
        s.computeDirect(h, Eigen::EigenvaluesOnly);
        return s.eigenvalues()(1);
    }
    if (n == 3) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> s;
        s.computeDirect(h, Eigen::EigenvaluesOnly);
        return s.eigenvalues()(2);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(h, Eigen::EigenvaluesOnly);
    return s.eigenvalues()(n - 1);
}

Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& m, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) * rel_tol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
    Eigen::VectorXd out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

Eigen::VectorXcd unrealify(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size() / 2;
    Eigen::VectorXcd out(n);
    out.real() = v.head(n);
    out.imag() = v.tail(n);
    return out;
}

Eigen::MatrixXd imaginary_unit_operator(Eigen::Index dim) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    j.topRightCorner(dim, dim) = -Eigen::MatrixXd::Identity(dim, dim);
    j.bottomLeftCorner(dim, dim) = Eigen::MatrixXd::Identity(dim, dim);
    return j;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace isolab::linalg
