#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gql {

using Complex = std::complex<double>;

/// Largest singular value, from the Hermitian eigendecomposition of A^* A.
double spectral_norm(const Eigen::MatrixXcd& a);

/// Smallest eigenvalue of the Hermitian part (A + A^*)/2.
double min_hermitian_eigenvalue(const Eigen::MatrixXcd& a);

/// max |A - A^*| entrywise.
double hermitian_defect(const Eigen::MatrixXcd& a);

/// max |A_ij - B_ij|; shapes must agree.
double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace gql
