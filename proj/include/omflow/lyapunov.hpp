#pragma once

// =============================================================================
// omflow - dense Lyapunov solver
// =============================================================================

#include <Eigen/Dense>
#include <complex>

#include "omflow/errors.hpp"

namespace omflow {

/// Solves the continuous Lyapunov equation  M X + X M^dag + Q = 0  for X by
/// Kronecker vectorization:  (I (x) M + conj(M) (x) I) vec(X) = -vec(Q).
/// Intended for the small dense systems of this library (n <= ~16).
[[nodiscard]] inline Eigen::MatrixXcd solve_lyapunov(const Eigen::MatrixXcd& M,
                                                     const Eigen::MatrixXcd& Q) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw numerical_error("solve_lyapunov: dimension mismatch");
    }
    // vec is column-major: vec(M X) = (I (x) M) vec(X),
    // vec(X M^dag) = (conj(M) (x) I) vec(X).
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Eigen::Index col = 0; col < n; ++col) {
        A.block(n * col, n * col, n, n) += M;
        for (Eigen::Index row = 0; row < n; ++row) {
            A.block(n * row, n * col, n, n) +=
                std::conj(M(row, col)) * Eigen::MatrixXcd::Identity(n, n);
        }
    }
    Eigen::VectorXcd q(n * n);
    for (Eigen::Index col = 0; col < n; ++col) q.segment(n * col, n) = Q.col(col);

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible()) {
        throw numerical_error("solve_lyapunov: singular operator "
                              "(marginally stable dynamics?)");
    }
    const Eigen::VectorXcd x = lu.solve(-q);
    Eigen::MatrixXcd X(n, n);
    for (Eigen::Index col = 0; col < n; ++col) X.col(col) = x.segment(n * col, n);
    // The exact solution is Hermitian for Hermitian Q; symmetrize roundoff.
    return 0.5 * (X + X.adjoint());
}

}  // namespace omflow
