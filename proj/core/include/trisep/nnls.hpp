#pragma once

// Nonnegative least squares (Lawson-Hanson active set) and the real
// vectorisation of Hermitian matrices used to fit convex sums of projectors.

#include <Eigen/Dense>

#include "trisep/matcore.hpp"

namespace trisep {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;  ///< ||A x - b||_2
  int iterations = 0;
  bool converged = true;
};

/// min ||A x - b|| subject to x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0);

/// Real vector of length d^2 with the same Euclidean norm as the Frobenius
/// norm of the Hermitian matrix m: diagonal entries, then sqrt(2) Re and
/// sqrt(2) Im of the strict upper triangle.
Eigen::VectorXd hermitian_to_real(const CMatrix& m);

}  // namespace trisep
