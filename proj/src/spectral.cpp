#include "zmap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zmap/error.hpp"
#include "zmap/rhp.hpp"

namespace zmap {

namespace {

SieSystem assemble_unchecked(const LaurentSeries& A, IndexRange rows, IndexRange cols) {
  SieSystem s{rows, cols, MatrixX::Zero(2 * rows.size(), 2 * cols.size()), MatrixX::Zero(2 * rows.size(), 2), {}};
  // U_0, U_{-1}, U_1, U_{-2}, ... restricted to the column range.
  s.col_position.assign(cols.size(), 0);
  Eigen::Index pos = 0;
  for (int t = 0; pos < cols.size(); ++t) {
    const int idx = (t % 2 == 0) ? t / 2 : -(t + 1) / 2;
    if (cols.contains(idx)) s.col_position[idx - cols.lo] = pos++;
  }
  for (int k = rows.lo; k <= rows.hi; ++k) {
    const Matrix2 Ak = A(k);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) s.rhs(s.row_index(k, r), c) = Ak(r, c);
    if (cols.contains(k))
      for (int r = 0; r < 2; ++r) s.matrix(s.row_index(k, r), s.col_index(k, r)) += 1.0;
    for (int l = cols.lo; l <= std::min(cols.hi, -1); ++l) {
      const Matrix2 B = A(k - l);
      if (B.isZero(0.0)) continue;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) s.matrix(s.row_index(k, r), s.col_index(l, c)) += B(r, c);
    }
  }
  return s;
}

double two_norm(const Matrix2& M) { return Eigen::JacobiSVD<Matrix2>(M).singularValues()(0); }

}  // namespace

LaurentSeries::LaurentSeries(int cutoff) : cutoff_(cutoff), coef_(2 * cutoff + 1, Matrix2::Zero()) {
  if (cutoff < 0) throw Error(ErrorCode::invalid_argument, "negative Laurent cutoff");
}

Matrix2 LaurentSeries::operator()(int k) const {
  if (k < -cutoff_ || k > cutoff_) return Matrix2::Zero();
  return coef_[k + cutoff_];
}

Matrix2& LaurentSeries::at(int k) {
  if (k < -cutoff_ || k > cutoff_) throw Error(ErrorCode::invalid_argument, "Laurent index out of range");
  return coef_[k + cutoff_];
}

double LaurentSeries::max_entry() const {
  double worst = 0.0;
  for (const auto& M : coef_) worst = std::max(worst, M.cwiseAbs().maxCoeff());
  return worst;
}

double LaurentSeries::tail_entry() const {
  double worst = 0.0;
  for (int k = std::max(cutoff_ - 2, 0); k <= cutoff_; ++k)
    worst = std::max({worst, (*this)(k).cwiseAbs().maxCoeff(), (*this)(-k).cwiseAbs().maxCoeff()});
  return worst;
}

bool LaurentSeries::tail_resolved(double rel) const { return tail_entry() <= rel * max_entry(); }

LaurentSeries laurent_coefficients(const CircleFunction& f, int K) {
  const int M = 4 * K + 8;
  std::vector<Complex> twiddle(M);
  for (int t = 0; t < M; ++t) twiddle[t] = std::polar(1.0, -2.0 * kPi * t / M);
  std::vector<Matrix2> samples(M);
  for (int j = 0; j < M; ++j) samples[j] = f(std::conj(twiddle[j]));

  LaurentSeries A(K);
  for (int k = -K; k <= K; ++k) {
    const int kk = ((k % M) + M) % M;
    Matrix2 acc = Matrix2::Zero();
    for (int j = 0; j < M; ++j) acc += samples[j] * twiddle[(static_cast<long>(j) * kk) % M];
    A.at(k) = acc / static_cast<double>(M);
  }
  if (!A.tail_resolved())
    throw Error(ErrorCode::tail_not_resolved, "Laurent coefficients not decayed at cutoff " + std::to_string(K));
  return A;
}

LaurentSeries cauchy_minus_action(const LaurentSeries& U) {
  LaurentSeries out(U.cutoff());
  for (int k = -U.cutoff(); k < 0; ++k) out.at(k) = -U(k);
  return out;
}

Eigen::Index SieSystem::row_index(int k, int comp) const { return 2 * static_cast<Eigen::Index>(k - rows.lo) + comp; }

Eigen::Index SieSystem::col_index(int l, int comp) const {
  if (!cols.contains(l)) throw Error(ErrorCode::invalid_argument, "Laurent index outside the column range");
  return 2 * col_position[l - cols.lo] + comp;
}

SieSystem assemble_sie(const LaurentSeries& A, IndexRange rows, IndexRange cols) {
  if (rows.size() <= cols.size())
    throw Error(ErrorCode::shape_violation, "truncation must have more rows than columns");
  return assemble_unchecked(A, rows, cols);
}

SieSystem precondition_sie(const LaurentSeries& Ainv, const SieSystem& system) {
  // T_{G^{-1}} maps the row range into a range extended downward by the
  // negative Laurent support of G^{-1} - I.
  const double cut = 1e-15 * std::max(Ainv.max_entry(), 1.0);
  int reach = 0;
  for (int k = -Ainv.cutoff(); k < 0; ++k)
    if (Ainv(k).cwiseAbs().maxCoeff() > cut) {
      reach = -k;
      break;
    }
  const SieSystem P = assemble_unchecked(Ainv, {system.rows.lo - reach, system.rows.hi}, system.rows);
  // P's unknowns are interlaced, system rows are ordered by k: permute.
  MatrixX Pk(P.matrix.rows(), P.matrix.cols());
  for (int k = system.rows.lo; k <= system.rows.hi; ++k)
    for (int c = 0; c < 2; ++c) Pk.col(system.row_index(k, c)) = P.matrix.col(P.col_index(k, c));
  SieSystem out = system;
  out.rows = P.rows;
  out.matrix = Pk * system.matrix;
  out.rhs = Pk * system.rhs;
  return out;
}

CircleFunction model_jump_minus_identity(int m) {
  const ContourSystem S = model_contour(m);
  auto value = S.circles()[0].jump.value;
  return [value](const Complex& z) { return Matrix2(value(z) - Matrix2::Identity()); };
}

CircleFunction model_inverse_jump_minus_identity(int m) {
  const ContourSystem S = model_contour(m);
  auto inverse = S.circles()[0].jump.inverse;
  return [inverse](const Complex& z) { return Matrix2(inverse(z) - Matrix2::Identity()); };
}

SpectralSolution spectral_solve_model(int m, int K) {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "model problem needs m >= 0");
  if (K < m + 20) throw Error(ErrorCode::invalid_argument, "spectral solve needs K >= m + 20");
  const int KA = 2 * K + m;
  const LaurentSeries A = laurent_coefficients(model_jump_minus_identity(m), KA);
  const SieSystem sys = assemble_sie(A, {-K - std::max(m, 1), K}, {-K, K});

  const LeastSquares ls(sys.matrix);
  const MatrixX X = ls.solve(sys.rhs);

  SpectralSolution out;
  out.m = m;
  out.K = K;
  out.rows = static_cast<int>(sys.matrix.rows());
  out.cols = static_cast<int>(sys.matrix.cols());
  out.U = LaurentSeries(K);
  for (int l = -K; l <= K; ++l)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out.U.at(l)(r, c) = X(sys.col_index(l, r), c);
  out.Y0 = Matrix2::Identity() + out.U(0);
  out.residual = (sys.matrix * X - sys.rhs).cwiseAbs().maxCoeff();
  out.condition_estimate = ls.condition_estimate();
  out.y0_error = two_norm(out.Y0 - model_exact_solution(m, Complex(0.0)));
  if (!(out.condition_estimate <= 1e8))
    throw Error(ErrorCode::ill_conditioned, "spectral system condition estimate too large");
  return out;
}

SquareTruncationReport square_truncation_model(int m, int K) {
  if (m < 0 || K < 1) throw Error(ErrorCode::invalid_argument, "square truncation needs m >= 0, K >= 1");
  const LaurentSeries A = laurent_coefficients(model_jump_minus_identity(m), 2 * K + m + 20);
  const SieSystem sys = assemble_unchecked(A, {-K, K}, {-K, K});
  SquareTruncationReport rep;
  rep.m = m;
  rep.K = K;
  const auto sigma = singular_values(sys.matrix);
  rep.sigma_ratio = sigma.back() / sigma.front();
  rep.singular = rep.sigma_ratio < 1e-12;
  if (rep.singular) {
    rep.y12 = Complex(NAN, NAN);
    return rep;
  }
  const MatrixX X = sys.matrix.partialPivLu().solve(sys.rhs);
  rep.y12 = X(sys.col_index(0, 0), 1);
  return rep;
}

bool SquareTruncationReport::recovers_y12() const {
  return !singular && std::abs(y12 + 1.0) <= 1e-6;
}

void write_laurent_csv(std::ostream& os, const LaurentSeries& U) {
  os << "k,entry,re,im\n";
  static const char* names[2][2] = {{"11", "12"}, {"21", "22"}};
  char buf[128];
  for (int k = -U.cutoff(); k <= U.cutoff(); ++k) {
    const Matrix2 C = U(k);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g\n", k, names[r][c], C(r, c).real(), C(r, c).imag());
        os << buf;
      }
  }
}

nlohmann::json spectral_report_json(const SpectralSolution& s) {
  return {{"m", s.m},           {"K", s.K},
          {"rows", s.rows},     {"cols", s.cols},
          {"residual", s.residual}, {"y0_error", s.y0_error},
          {"condition_estimate", s.condition_estimate}};
}

}  // namespace zmap
