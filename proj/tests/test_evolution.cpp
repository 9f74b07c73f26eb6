#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "zmap/evolution.hpp"

using namespace zmap;

namespace {

const Exponent kTwoThirds = Exponent::rational(2, 3);

// a = 2/3 values from a 320-digit evolution.
const Complex kF68(3.6103268605251780101, 2.5680860879596609126);
const Complex kF86(4.0291912215410537702, 1.8425917332002915384);
const Complex kF34(2.2786536939893913196, 1.6219798238859329331);
const Complex kF125(5.1011479160173260435, 1.3739700891744661014);

}  // namespace

TEST_CASE("stable scheme reproduces reference values") {
  const Lattice L = evolve_stable(kTwoThirds, 49);
  CHECK(L.method() == Method::stable);
  CHECK(std::abs(L(6, 8) - kF68) <= 1e-11);
  CHECK(std::abs(L(8, 6) - kF86) <= 1e-11);
  CHECK(std::abs(L(3, 4) - kF34) <= 1e-11);
  CHECK(std::abs(L(12, 5) - kF125) <= 1e-11);
  CHECK(std::abs(L(0, 5) - Complex(1.4, 2.4248711305964282109)) <= 1e-11);
  CHECK(std::abs(L(5, 0) - 2.8) <= 1e-11);
  CHECK(std::abs(L(10, 10) - Complex(4.8360856649259718516, 2.7921153604691001551)) <= 1e-11);
  CHECK(std::abs(L(25, 25) - Complex(8.9111633357825534077, 5.1448625507067806956)) <= 1e-11);
}

TEST_CASE("oracle reproduces reference values") {
  const OracleRun run = evolve_oracle(kTwoThirds, 12, 256);
  CHECK(run.lattice.method() == Method::oracle);
  CHECK(std::abs(run.lattice(6, 8) - kF68) <= 1e-15);
  CHECK(std::abs(run.lattice(12, 5) - kF125) <= 1e-14);
  CHECK(run.cross_ratio_residual < 1e-60);
  CHECK(run.constraint_residual < 1e-60);
  CHECK(run.symmetry_defect < 1e-60);
}

TEST_CASE("other exponents") {
  const Lattice third = evolve_stable(Exponent::rational(1, 3), 49);
  CHECK(std::abs(third(6, 8) - Complex(1.9802561060569825635, 0.6325092429236392295)) <= 1e-11);
  CHECK(std::abs(third(10, 10) - Complex(2.2548230904139538769, 0.6041780261514673202)) <= 1e-11);
  const Lattice three_halves = evolve_stable(Exponent::rational(3, 2), 49);
  CHECK(std::abs(three_halves(6, 8) - Complex(7.924629942559474862, 43.480862146544305278)) <= 1e-9);
  CHECK(std::abs(three_halves(10, 10) - Complex(28.417137221635913024, 68.605038084290714248)) <= 1e-9);
}

TEST_CASE("a = 1 is exact for every method") {
  const Exponent one = Exponent::rational(1, 1);
  const int N = 20;
  const Lattice naive = evolve_forward_naive(one, N);
  const Lattice variant = evolve_forward_naive(one, N, 53, ForwardVariant::constraint_fill);
  const Lattice stable = evolve_stable(one, N);
  const Lattice oracle = evolve_oracle(one, N, 128).lattice;
  for (const Lattice* L : {&naive, &variant, &stable, &oracle}) {
    double worst = 0.0;
    for (int n = 0; n <= N; ++n)
      for (int m = 0; m <= N; ++m) worst = std::max(worst, std::abs((*L)(n, m) - Complex(n, m)));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("backward fill at a = 1 only amplifies rounding of the diagonals") {
  const Lattice B = evolve_backward_crossratio(Exponent::rational(1, 1), 20);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m) worst = std::max(worst, std::abs(B(n, m) - Complex(n, m)));
  CHECK(worst <= 1e-6);
  for (int n = 0; n < 20; ++n) CHECK(std::abs(B(n, n + 1) - Complex(n, n + 1)) <= 1e-13);
}

TEST_CASE("symmetry and residuals of stable lattices") {
  for (const Exponent& a : {Exponent::rational(1, 3), Exponent::rational(2, 3), Exponent::rational(3, 2)}) {
    CAPTURE(a.to_string());
    const Lattice L = evolve_stable(a, 49);
    CHECK(symmetry_defect(L) <= 1e-9);
    const auto r = lattice_residuals(L);
    CHECK(r.cross_ratio <= 1e-9);
    CHECK(r.constraint <= 1e-9);
  }
}

TEST_CASE("stable lattice from a given boundary value solution") {
  const PainleveSolution sol = solve_bvp(2.0 / 3, 300);
  const Lattice A = evolve_stable(kTwoThirds, 30, sol);
  const Lattice B = evolve_stable(kTwoThirds, 30);
  CHECK(max_difference(A, B, 30) < 1e-12);
}

TEST_CASE("naive forward evolution loses the diagonal") {
  const Lattice ref = evolve_stable(kTwoThirds, 30);
  const EvolutionReport rep = make_evolution_report(evolve_forward_naive(kTwoThirds, 30), ref);
  REQUIRE(rep.diagonal_error.size() == 29);
  CHECK(rep.method == Method::naive);
  CHECK(rep.diagonal_error.front() < 1e-13);  // n = 2
  CHECK(rep.diagonal_error[25 - 2] >= 0.1);
}

TEST_CASE("constraint-fill variant agrees early") {
  const Lattice A = evolve_forward_naive(kTwoThirds, 6, 53, ForwardVariant::constraint_fill);
  CHECK(std::abs(A(3, 4) - kF34) < 1e-8);
}

TEST_CASE("extended precision forward evolution is an oracle") {
  const Lattice L = evolve_forward_naive(kTwoThirds, 10, 256);
  CHECK(L.method() == Method::oracle);
  CHECK(std::abs(L(6, 8) - kF68) <= 1e-15);
}

TEST_CASE("forward Painleve recursion drifts off the unit circle") {
  const ForwardPainleve fw = dpii_forward_unstable(2.0 / 3, 30);
  REQUIRE(fw.modulus_error.size() == 31);
  CHECK(fw.modulus_error[2] < 1e-13);
  double worst = 0.0;
  for (double e : fw.modulus_error) worst = std::max(worst, e);
  CHECK(worst >= 1e-3);
}

TEST_CASE("backward cross-ratio fill") {
  const Lattice ref = evolve_stable(kTwoThirds, 10);
  const Lattice B = evolve_backward_crossratio(kTwoThirds, 10);
  CHECK(B.method() == Method::backward);
  // Diagonals are shared; the fill is accurate near the diagonal.
  for (int n = 0; n < 10; ++n) CHECK(std::abs(B(n, n) - ref(n, n)) < 1e-13);
  CHECK(std::abs(B(6, 8) - ref(6, 8)) < 1e-6);
}

TEST_CASE("error series csv") {
  std::ostringstream os;
  write_error_series(os, 2, {0.5, 0.25});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,error");
  std::getline(in, line);
  CHECK(line.rfind("2,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("3,", 0) == 0);
}
