#pragma once

#include <Eigen/Dense>

namespace isolab::linalg {

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& m);

/// Eigenvalues of a general complex matrix, preceded by a balancing pass
/// (permutation isolation + radix-2 diagonal scaling, as in LAPACK's gebal).
/// The permutation phase returns exact zeros for matrices that are
/// permutation-similar to a strictly triangular one, which plain
/// Hessenberg/QR does not guarantee.
Eigen::VectorXcd balanced_eigenvalues(const Eigen::MatrixXcd& m);

/// Largest eigenvalue of a Hermitian matrix (closed-form path for dim <= 3).
double lambda_max_hermitian(const Eigen::MatrixXcd& h);

/// Orthonormal basis (columns) of the nullspace: singular vectors whose
/// singular value is <= rel_tol * sigma_max. Zero matrix maps to identity.
Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);

/// [Re v; Im v] stacking of a complex vector, and its inverse.
Eigen::VectorXd realify(const Eigen::VectorXcd& v);
Eigen::VectorXcd unrealify(const Eigen::VectorXd& v);

/// Multiply-by-i operator on realified coordinates of dimension dim.
Eigen::MatrixXd imaginary_unit_operator(Eigen::Index dim);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

} // namespace isolab::linalg
