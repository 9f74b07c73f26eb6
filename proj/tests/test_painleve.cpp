#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "zmap/error.hpp"
#include "zmap/painleve.hpp"

using namespace zmap;

namespace {

const double kA = 2.0 / 3;

// Ratios of the a = 2/3 lattice from a 320-digit evolution.
const Complex kX1(0.78571428571428571429, 0.61858957413174189055);
const Complex kX2(0.75479278311487771966, 0.65596330275229357798);
const Complex kX5(0.72839701810626103439, 0.68515529919420986321);
const Complex kX10(0.71826604199482981487, 0.69576856275422603547);
const Complex kX20(0.71283547653673282812, 0.70133129360570316824);

}  // namespace

TEST_CASE("first step of the recurrence") {
  const Complex x0 = std::polar(1.0, kPi / 6);
  CHECK(std::abs(x1_from_x0(x0, kA) - kX1) < 1e-14);
  CHECK(std::abs(dpii_residual(x0, kX1, kX2, 1, kA)) < 1e-13);
}

TEST_CASE("boundary value problem at a = 2/3, N = 300") {
  const PainleveSolution sol = solve_bvp(kA, 300);
  CHECK(sol.newton_iters <= 15);
  CHECK(sol.final_residual <= 1e-12);
  CHECK(sol.max_modulus_defect() <= 1e-12);
  CHECK(std::abs(sol.x[0] - std::polar(1.0, kPi / 6)) <= 1e-10);
  CHECK(std::abs(sol.x[1] - kX1) < 1e-13);
  CHECK(std::abs(sol.x[2] - kX2) < 1e-13);
  CHECK(std::abs(sol.x[5] - kX5) < 1e-13);
  CHECK(std::abs(sol.x[10] - kX10) < 1e-13);
  CHECK(std::abs(sol.x[20] - kX20) < 1e-13);
  const auto F = bvp_residual(sol.x, kA);
  for (int n = 1; n < sol.N; ++n) CHECK(std::abs(F[n]) <= 1e-12 * (n + 1));
  for (const Complex& x : sol.x) {
    CHECK(x.real() > 0.0);
    CHECK(x.imag() > 0.0);
  }
}

TEST_CASE("a = 1 gives constant ratios") {
  const PainleveSolution sol = solve_bvp(1.0, 60);
  const Complex w = std::polar(1.0, kPi / 4);
  for (const Complex& x : sol.x) CHECK(std::abs(x - w) < 1e-13);
  CHECK(std::abs(x_asymptotic(17, 1.0) - w) < 1e-15);
}

TEST_CASE("asymptotic expansion order") {
  const PainleveSolution sol = solve_bvp(kA, 300);
  auto resid = [](int n) {
    return std::abs(dpii_residual(x_asymptotic(n - 1, kA), x_asymptotic(n, kA), x_asymptotic(n + 1, kA), n, kA));
  };
  auto err = [&](int n) { return std::abs(x_asymptotic(n, kA) - sol.x[n]); };
  // Residual O(n^-5), pointwise error O(n^-6).
  CHECK(std::log2(resid(40) / resid(80)) > 4.5);
  CHECK(std::log2(err(40) / err(80)) > 5.5);
  CHECK(resid(10) > resid(20));
  CHECK(err(10) > err(20));
}

TEST_CASE("boundary size selection") {
  const int N = select_bvp_size(10, kA);
  CHECK(N >= 50);
  CHECK(asymptotic_modulus_defect(N, kA) <= 2.3e-16);
  CHECK(asymptotic_modulus_defect(N - 1, kA) > 2.3e-16);
  CHECK(select_bvp_size(400, kA) >= 420);
}

TEST_CASE("Newton iteration budget is enforced") {
  NewtonOptions opts;
  opts.max_iters = 1;
  try {
    solve_bvp(kA, 300, opts);
    FAIL("expected NewtonDivergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::newton_divergence);
  }
}

TEST_CASE("diagonal reconstruction") {
  const PainleveSolution sol = solve_bvp(kA, 300);
  const auto T = reconstruct_diagonals(sol);
  REQUIRE(T.size() == static_cast<std::size_t>(sol.N + 1));
  CHECK(std::abs(T[0].f_diag) < 1e-15);
  CHECK(std::abs(T[0].f_sub - 1.0) < 1e-14);
  CHECK(std::abs(T[0].f_super - std::polar(1.0, kPi / 3)) < 1e-14);
  CHECK(std::abs(T[2].f_diag - Complex(1.6363636363636363636, 0.94475498594666034192)) < 1e-13);
  CHECK(std::abs(T[10].f_diag - Complex(4.8360856649259718516, 2.7921153604691001551)) < 1e-12);
  CHECK(std::abs(T[20].f_diag - Complex(7.6791300002370797952, 4.4335477727790089806)) < 1e-12);
  CHECK(std::abs(T[25].f_diag - Complex(8.9111633357825534077, 5.1448625507067806956)) < 1e-12);
  // The diagonal of Z^a lies on the ray of angle a pi / 4.
  for (int n = 1; n <= 50; ++n) CHECK(std::abs(std::arg(T[n].f_diag) - kA * kPi / 4) < 1e-12);
}

TEST_CASE("painleve output") {
  const PainleveSolution sol = solve_bvp(kA, 60);
  std::ostringstream os;
  write_painleve_csv(os, sol);
  CHECK(os.str().rfind("n,re,im,abs_err_modulus\n", 0) == 0);
  const auto j = painleve_diagnostics_json(sol);
  CHECK(j.at("N") == 60);
  CHECK(j.at("iters").get<int>() <= 15);
  CHECK(j.contains("final_residual"));
}
