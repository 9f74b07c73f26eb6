#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmap/linalg.hpp"

namespace zmap {

/// Laurent coefficients on the unit circle, k = -K..K; zero outside.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  explicit LaurentSeries(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  Matrix2 operator()(int k) const;
  Matrix2& at(int k);

  double max_entry() const;
  /// Largest entry among |k| in [K-2, K].
  double tail_entry() const;
  bool tail_resolved(double rel = 1e-13) const;

 private:
  int cutoff_ = 0;
  std::vector<Matrix2> coef_;
};

using CircleFunction = std::function<Matrix2(const Complex&)>;

/// Discrete Fourier sums over M = 4K + 8 equispaced samples of the unit circle.
/// Throws TailNotResolved when the coefficients near |k| = K are not negligible.
LaurentSeries laurent_coefficients(const CircleFunction& f, int K);

/// C_- in the Laurent basis: keeps k < 0 with a sign flip, drops k >= 0.
LaurentSeries cauchy_minus_action(const LaurentSeries& U);

struct IndexRange {
  int lo = 0, hi = 0;
  int size() const noexcept { return hi - lo + 1; }
  bool contains(int k) const noexcept { return lo <= k && k <= hi; }
};

/// Truncated operator U -> U_k + sum_{l<0} A_{k-l} U_l acting on one column of
/// the 2x2 unknowns, with its two right-hand sides (the columns of A_k).
/// Rows are ordered by k; unknowns interlaced as U_0, U_{-1}, U_1, U_{-2}, ...
struct SieSystem {
  IndexRange rows, cols;
  MatrixX matrix;
  MatrixX rhs;
  std::vector<Eigen::Index> col_position;  // by l - cols.lo

  Eigen::Index row_index(int k, int comp) const;
  Eigen::Index col_index(int l, int comp) const;
};

/// Rectangular truncation; ShapeViolation unless rows exceed columns.
SieSystem assemble_sie(const LaurentSeries& A, IndexRange rows, IndexRange cols);

/// Left-multiplies matrix and right-hand side by the truncation of T_{G^{-1}}
/// (Ainv holds the coefficients of G^{-1} - I) whose columns are the row range;
/// its rows reach down by the negative support of Ainv. The product clusters
/// singular values at 1 but inherits the kernel of T_{G^{-1}}, so it is a
/// diagnostic rather than a solver stage.
SieSystem precondition_sie(const LaurentSeries& Ainv, const SieSystem& system);

/// Model jump [[z^m, 0], [e^z, z^{-m}]] minus I, and its inverse minus I.
CircleFunction model_jump_minus_identity(int m);
CircleFunction model_inverse_jump_minus_identity(int m);

struct SpectralSolution {
  int m = 0;
  int K = 0;
  LaurentSeries U;
  Matrix2 Y0;
  int rows = 0, cols = 0;  // scalar sizes per column problem
  double residual = 0.0;   // max rowwise defect of the truncated equations
  double condition_estimate = 0.0;
  double y0_error = 0.0;  // 2-norm distance to the closed form
};

/// Rows k in [-K-max(m,1), K] against unknowns l in [-K, K]; needs K >= m + 20.
SpectralSolution spectral_solve_model(int m, int K);

struct SquareTruncationReport {
  int m = 0, K = 0;
  double sigma_ratio = 0.0;  // sigma_min / sigma_max
  Complex y12;               // 12-entry of Y(0) from the square solve, NaN if singular
  bool singular = false;     // sigma ratio below 1e-12

  /// The square solve recovers Y_12(0) = -1 to 1e-6.
  bool recovers_y12() const;
};

/// The square truncation rows = cols = [-K, K], which cannot see the index of
/// the 12-subproblem.
SquareTruncationReport square_truncation_model(int m, int K);

void write_laurent_csv(std::ostream& os, const LaurentSeries& U);
nlohmann::json spectral_report_json(const SpectralSolution& s);

}  // namespace zmap
