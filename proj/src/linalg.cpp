#include "zmap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zmap/error.hpp"

namespace zmap {

namespace {

double cabs1(const Complex& z) { return std::abs(z.real()) + std::abs(z.imag()); }

constexpr int kExactSvdMaxCols = 700;
constexpr int kPowerIterations = 80;

}  // namespace

std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diag,
                                       std::span<const Complex> upper, std::span<const Complex> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || (n > 0 && (lower.size() != n - 1 || upper.size() != n - 1)))
    throw Error(ErrorCode::invalid_argument, "tridiagonal system with inconsistent band sizes");
  if (n == 0) return {};

  std::vector<Complex> d(diag.begin(), diag.end());
  std::vector<Complex> du(upper.begin(), upper.end());
  std::vector<Complex> dl(lower.begin(), lower.end());
  std::vector<Complex> du2(n > 2 ? n - 2 : 0, Complex(0.0));
  std::vector<Complex> b(rhs.begin(), rhs.end());

  auto singular = [] { return Error(ErrorCode::ill_conditioned, "singular tridiagonal matrix"); };

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (cabs1(d[k]) >= cabs1(dl[k])) {
      if (cabs1(d[k]) == 0.0) throw singular();
      const Complex mult = dl[k] / d[k];
      d[k + 1] -= mult * du[k];
      b[k + 1] -= mult * b[k];
    } else {
      // Swap rows k and k+1; the old row k+1 becomes the pivot row.
      const Complex mult = d[k] / dl[k];
      d[k] = dl[k];
      const Complex temp = d[k + 1];
      d[k + 1] = du[k] - mult * temp;
      if (k + 2 < n) {
        du2[k] = du[k + 1];
        du[k + 1] = -mult * du2[k];
      }
      du[k] = temp;
      const Complex bk = b[k];
      b[k] = b[k + 1];
      b[k + 1] = bk - mult * b[k + 1];
    }
  }
  if (cabs1(d[n - 1]) == 0.0) throw singular();

  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  if (n > 2)
    for (std::size_t k = n - 2; k-- > 0;) b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
  return b;
}

LeastSquares::LeastSquares(MatrixX A) : A_(std::move(A)) {
  if (A_.rows() < A_.cols() || A_.cols() == 0)
    throw Error(ErrorCode::shape_violation, "least squares needs rows >= cols > 0");
  // Householder QR on badly row-scaled systems is only accurate with the
  // heavy rows first and column pivoting.
  const Eigen::VectorXd norms = A_.rowwise().lpNorm<Eigen::Infinity>();
  row_order_.resize(static_cast<std::size_t>(A_.rows()));
  std::iota(row_order_.begin(), row_order_.end(), Eigen::Index{0});
  std::stable_sort(row_order_.begin(), row_order_.end(),
                   [&](Eigen::Index p, Eigen::Index q) { return norms[p] > norms[q]; });
  MatrixX sorted(A_.rows(), A_.cols());
  for (Eigen::Index i = 0; i < A_.rows(); ++i) sorted.row(i) = A_.row(row_order_[i]);
  qr_.setThreshold(0.0);
  qr_.compute(sorted);
}

MatrixX LeastSquares::solve(const MatrixX& rhs) const {
  if (rhs.rows() != A_.rows()) throw Error(ErrorCode::invalid_argument, "right-hand side has wrong row count");
  MatrixX sorted(rhs.rows(), rhs.cols());
  for (Eigen::Index i = 0; i < rhs.rows(); ++i) sorted.row(i) = rhs.row(row_order_[i]);
  return qr_.solve(sorted);
}

double LeastSquares::condition_estimate() const {
  const Eigen::Index n = A_.cols();
  if (n <= kExactSvdMaxCols) {
    const auto sigma = singular_values(A_);
    return sigma.back() > 0.0 ? sigma.front() / sigma.back() : INFINITY;
  }
  const MatrixX R = qr_.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const auto Rt = R.triangularView<Eigen::Upper>();

  // Deterministic, non-symmetric start vector.
  VectorX x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.5 * std::sin(1.7 * i), 0.3 * std::cos(0.9 * i));
  x.normalize();
  VectorX y = x;

  double sigma_max = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    VectorX z = Rt.adjoint() * (Rt * x);
    sigma_max = std::sqrt(z.norm());
    x = z / z.norm();
  }
  double sigma_min = INFINITY;
  for (int it = 0; it < kPowerIterations; ++it) {
    VectorX w = Rt.adjoint().solve(y);
    VectorX z = Rt.solve(w);
    const double zn = z.norm();
    if (!std::isfinite(zn) || zn == 0.0) return INFINITY;
    sigma_min = 1.0 / std::sqrt(zn);
    y = z / zn;
  }
  return sigma_max / sigma_min;
}

std::vector<double> singular_values(const MatrixX& A) {
  Eigen::BDCSVD<MatrixX> svd(A);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

int count_small_singular_values(std::span<const double> sigma, double rel_threshold) {
  if (sigma.empty()) return 0;
  const double cut = rel_threshold * *std::max_element(sigma.begin(), sigma.end());
  return static_cast<int>(std::count_if(sigma.begin(), sigma.end(), [cut](double s) { return s < cut; }));
}

}  // namespace zmap
