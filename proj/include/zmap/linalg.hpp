#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zmap/scalar.hpp"

namespace zmap {

using Matrix2 = Eigen::Matrix2cd;
using MatrixX = Eigen::MatrixXcd;
using VectorX = Eigen::VectorXcd;

/// Solves a complex tridiagonal system by Gaussian elimination with partial
/// pivoting (row interchanges fill one extra superdiagonal). lower[i] is
/// A(i+1, i), upper[i] is A(i, i+1); both have size n - 1.
std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diag,
                                       std::span<const Complex> upper, std::span<const Complex> rhs);

/// Dense least-squares solver built on a Householder QR factorisation.
/// Requires rows >= cols; the same factorisation serves several right-hand sides.
class LeastSquares {
 public:
  explicit LeastSquares(MatrixX A);

  MatrixX solve(const MatrixX& rhs) const;

  /// sigma_max / sigma_min. Exact singular values for small systems, power and
  /// inverse iteration on the triangular factor otherwise.
  double condition_estimate() const;

  const MatrixX& matrix() const noexcept { return A_; }

 private:
  MatrixX A_;
  std::vector<Eigen::Index> row_order_;  // rows by decreasing max-norm
  Eigen::ColPivHouseholderQR<MatrixX> qr_;
};

/// Singular values in descending order.
std::vector<double> singular_values(const MatrixX& A);

/// Number of singular values below rel_threshold * sigma_max.
int count_small_singular_values(std::span<const double> sigma, double rel_threshold);

}  // namespace zmap
