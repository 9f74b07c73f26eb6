#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "zmap/error.hpp"
#include "zmap/linalg.hpp"
#include "zmap/rhp.hpp"
#include "zmap/spectral.hpp"

using namespace zmap;

namespace {

Matrix2 scalar11(const Complex& v) {
  Matrix2 M = Matrix2::Zero();
  M(0, 0) = v;
  return M;
}

double norm2(const Matrix2& M) { return Eigen::JacobiSVD<Matrix2>(M).singularValues()(0); }

}  // namespace

TEST_CASE("laurent coefficients of monomials and the exponential") {
  const LaurentSeries P = laurent_coefficients([](const Complex& z) { return scalar11(z * z * z); }, 10);
  for (int k = -10; k <= 10; ++k) CHECK(std::abs(P(k)(0, 0) - (k == 3 ? 1.0 : 0.0)) < 1e-15);
  const LaurentSeries E = laurent_coefficients([](const Complex& z) { return scalar11(std::exp(z)); }, 30);
  double fact = 1.0;
  for (int k = 0; k <= 30; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(E(k)(0, 0) - 1.0 / fact) < 1e-14);
    CHECK(std::abs(E(-k - 1)(0, 0)) < 1e-14);
  }
  CHECK(E(31) == Matrix2::Zero());
  CHECK(E.tail_resolved());
}

TEST_CASE("unresolved tail is reported") {
  try {
    laurent_coefficients([](const Complex& z) { return scalar11(std::pow(z, 12)); }, 12);
    FAIL("expected TailNotResolved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::tail_not_resolved);
  }
}

TEST_CASE("model jump coefficients") {
  const LaurentSeries A = laurent_coefficients(model_jump_minus_identity(5), 40);
  double fact = 1.0;
  for (int k = -40; k <= 40; ++k) {
    if (k > 0) fact *= k;
    const double e21 = k >= 0 ? 1.0 / fact : 0.0;
    CHECK(std::abs(A(k)(1, 0) - e21) < 1e-14);
    CHECK(std::abs(A(k)(0, 0) - (k == 5 ? 1.0 : 0.0) + (k == 0 ? 1.0 : 0.0)) < 1e-14);
    CHECK(std::abs(A(k)(1, 1) - (k == -5 ? 1.0 : 0.0) + (k == 0 ? 1.0 : 0.0)) < 1e-14);
    CHECK(std::abs(A(k)(0, 1)) < 1e-15);
  }
}

TEST_CASE("Cauchy minus action") {
  LaurentSeries U(3);
  U.at(2) = scalar11(1.0);
  CHECK(cauchy_minus_action(U).max_entry() == 0.0);
  LaurentSeries V(3);
  V.at(-1) = scalar11(1.0);
  CHECK(cauchy_minus_action(V)(-1)(0, 0) == Complex(-1.0));
  LaurentSeries W(3);
  W.at(-2) = scalar11(Complex(2, 1));
  W.at(0) = scalar11(5.0);
  W.at(1) = scalar11(-3.0);
  const LaurentSeries C = cauchy_minus_action(W);
  CHECK(C(-2)(0, 0) == Complex(-2, -1));
  CHECK(C(0) == Matrix2::Zero());
  CHECK(C(1) == Matrix2::Zero());
  CHECK_THROWS_AS(W.at(4), Error);
}

TEST_CASE("truncated system layout") {
  const LaurentSeries Zero(4);
  const SieSystem s = assemble_sie(Zero, {-5, 3}, {-3, 3});
  CHECK(s.matrix.rows() == 18);
  CHECK(s.matrix.cols() == 14);
  // Identity on the shared indices, interlaced columns U_0, U_-1, U_1, ...
  CHECK(s.col_index(0, 0) == 0);
  CHECK(s.col_index(0, 1) == 1);
  CHECK(s.col_index(-1, 0) == 2);
  CHECK(s.col_index(1, 0) == 4);
  CHECK(s.col_index(-3, 1) == 11);
  CHECK(s.col_index(3, 0) == 12);
  for (int k = -3; k <= 3; ++k)
    for (int c = 0; c < 2; ++c) CHECK(s.matrix(s.row_index(k, c), s.col_index(k, c)) == Complex(1));
  CHECK(s.matrix.cwiseAbs().sum() == 14.0);
  CHECK_THROWS_AS(s.col_index(4, 0), Error);
  try {
    assemble_sie(Zero, {-3, 3}, {-3, 3});
    FAIL("expected ShapeViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::shape_violation);
  }
}

TEST_CASE("spectral solve of the model problem") {
  for (int m : {0, 1, 5, 20}) {
    CAPTURE(m);
    const SpectralSolution s = spectral_solve_model(m, m + 30);
    CHECK(s.y0_error <= 1e-12);
    CHECK(s.residual <= 1e-12);
    CHECK(s.condition_estimate <= 100);
    CHECK(s.rows > s.cols);
  }
  const SpectralSolution z = spectral_solve_model(0, 20);
  CHECK(std::abs(z.Y0(1, 0) - 1.0) < 1e-13);
  CHECK(std::abs(z.Y0(0, 0) - 1.0) < 1e-13);
  CHECK_THROWS_AS(spectral_solve_model(5, 10), Error);
}

TEST_CASE("spectral and Nystrom agree") {
  for (int m : {1, 5, 20}) {
    CAPTURE(m);
    const SpectralSolution s = spectral_solve_model(m, m + 30);
    const ContourSystem S = model_contour(m);
    const NystromSolution n = nystrom_solve(S, m + 40);
    CHECK(norm2(s.Y0 - evaluate_solution(n, S, Complex(0))) <= 1e-10);
  }
}

TEST_CASE("square truncation cannot see the index") {
  for (int m : {1, 2, 5}) {
    CAPTURE(m);
    const SquareTruncationReport rep = square_truncation_model(m, m + 20);
    CHECK(rep.singular);
    CHECK(!rep.recovers_y12());
    const SpectralSolution s = spectral_solve_model(m, m + 20);
    CHECK(std::abs(s.Y0(0, 1) + 1.0) <= 1e-10);
  }
}

TEST_CASE("preconditioning clusters singular values") {
  const int m = 5, K = 30;
  const LaurentSeries A = laurent_coefficients(model_jump_minus_identity(m), 2 * K + m);
  const LaurentSeries Ainv = laurent_coefficients(model_inverse_jump_minus_identity(m), 2 * K + m);
  const SieSystem sys = assemble_sie(A, {-K - m, K}, {-K, K});
  const SieSystem pre = precondition_sie(Ainv, sys);
  CHECK(pre.matrix.cols() == sys.matrix.cols());
  CHECK(pre.rows.lo < sys.rows.lo);
  auto clustered = [](const std::vector<double>& s) {
    double in = 0;
    for (double v : s) in += (v >= 0.5 && v <= 2.0);
    return in / s.size();
  };
  CHECK(clustered(singular_values(pre.matrix)) > clustered(singular_values(sys.matrix)));

  // Trivial jump: the preconditioner is the identity map.
  const LaurentSeries Zero(4);
  const SieSystem z = assemble_sie(Zero, {-4, 2}, {-2, 2});
  const SieSystem zp = precondition_sie(Zero, z);
  CHECK((zp.matrix - z.matrix).cwiseAbs().maxCoeff() == 0.0);

  for (int K0 : {10, 20, 40}) {
    const LaurentSeries B = laurent_coefficients(model_jump_minus_identity(0), 2 * K0);
    const LaurentSeries Binv = laurent_coefficients(model_inverse_jump_minus_identity(0), 2 * K0);
    const SieSystem p = precondition_sie(Binv, assemble_sie(B, {-K0 - 1, K0}, {-K0, K0}));
    CHECK(singular_values(p.matrix).back() >= 0.5);
  }
}

TEST_CASE("spectral output") {
  const SpectralSolution s = spectral_solve_model(2, 22);
  std::ostringstream os;
  write_laurent_csv(os, s.U);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,entry,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4 * 45);
  const auto j = spectral_report_json(s);
  CHECK(j.at("m") == 2);
  CHECK(j.at("K") == 22);
  CHECK(j.at("y0_error").get<double>() <= 1e-12);
}
