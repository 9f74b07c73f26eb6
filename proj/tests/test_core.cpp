#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "zmap/core.hpp"
#include "zmap/evolution.hpp"

using namespace zmap;

namespace {

Lattice identity_lattice(int N) {
  Lattice L(Exponent::rational(1, 1), N, Method::stable);
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) L(n, m) = Complex(n, m);
  return L;
}

}  // namespace

TEST_CASE("cross ratio of the unit square is -1") {
  const Complex cr = cross_ratio(Complex(0), Complex(1), Complex(1, 1), Complex(0, 1));
  CHECK(std::abs(cr + 1.0) < 1e-15);
}

TEST_CASE("fourth corner closes the quad") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const Complex A(u(rng), u(rng)), B(u(rng), u(rng)), C(u(rng), u(rng));
    Complex D;
    try {
      D = solve_cross_ratio_fourth(A, B, C);
    } catch (const Error&) {
      continue;
    }
    const Complex cr = cross_ratio(A, B, D, C);
    CHECK(std::abs(cr + 1.0) < 1e-9 * std::max(1.0, std::abs(D)));
  }
  CHECK(std::abs(solve_cross_ratio_fourth(Complex(0), Complex(1), Complex(0, 1)) - Complex(1, 1)) < 1e-15);
}

TEST_CASE("degenerate quads are rejected") {
  CHECK_THROWS_AS(solve_cross_ratio_fourth(Complex(0), Complex(1), Complex(-1)), Error);
  try {
    cross_ratio(Complex(0), Complex(1), Complex(1), Complex(0, 1));
    FAIL("expected DegenerateQuad");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_quad);
  }
}

TEST_CASE("constraint solve on the identity map") {
  // f = n + i m satisfies z f' = f at every interior stencil.
  const Lattice L = identity_lattice(4);
  for (int n = 1; n < 4; ++n)
    for (int m = 0; m < 4; ++m) {
      Cross<Complex> s = cross_at(L, n, m);
      const Complex east = solve_constraint(n, m, s, Slot::east, 1.0);
      CHECK(std::abs(east - Complex(n + 1, m)) < 1e-13);
    }
  for (int n = 0; n < 4; ++n)
    for (int m = 1; m < 4; ++m) {
      Cross<Complex> s = cross_at(L, n, m);
      const Complex north = solve_constraint(n, m, s, Slot::north, 1.0);
      CHECK(std::abs(north - Complex(n, m + 1)) < 1e-13);
    }
  Cross<Complex> s = cross_at(L, 0, 2);
  CHECK_THROWS_AS(solve_constraint(0, 2, s, Slot::east, 1.0), Error);
  s = cross_at(L, 2, 0);
  CHECK_THROWS_AS(solve_constraint(2, 0, s, Slot::north, 1.0), Error);
}

TEST_CASE("residuals vanish on the identity lattice") {
  const Lattice L = identity_lattice(10);
  const auto r = lattice_residuals(L);
  CHECK(r.cross_ratio < 1e-14);
  CHECK(r.constraint < 1e-14);
  CHECK(symmetry_defect(L) < 1e-13);
}

TEST_CASE("initial values") {
  const Lattice L(Exponent::rational(2, 3), 3, Method::naive);
  CHECK(L(0, 0) == Complex(0));
  CHECK(L(1, 0) == Complex(1));
  CHECK(std::abs(L(0, 1) - std::polar(1.0, kPi / 3)) < 1e-15);
  CHECK_THROWS_AS(Lattice(Exponent(0.5), 0, Method::naive), Error);
}

TEST_CASE("gamma values backing the asymptotic constant") {
  CHECK(std::abs(std::tgamma(0.5) - std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(std::tgamma(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(std::tgamma(1.5) - std::sqrt(kPi) / 2) < 1e-15);
}

TEST_CASE("asymptotic constant and value") {
  CHECK(std::abs(asymptotic_constant(1.0) - 2.0) < 1e-14);
  CHECK(std::abs(asymptotic_constant(2.0 / 3) - 1.5164042644682678341) < 1e-13);
  CHECK(std::abs(asymptotic_constant(1.0 / 3) - 1.2167333254674517701) < 1e-13);
  CHECK(std::abs(asymptotic_constant(1.5) - 3.9449001589181851897) < 1e-13);
  CHECK(std::abs(asymptotic_value(1, 0, 2.0 / 3) - 0.95527482647696145998) < 1e-13);
  CHECK(std::abs(asymptotic_value(3, 4, 1.0) - Complex(3, 4)) < 1e-13);
  CHECK(asymptotic_params(2.0 / 3).c_a.imag() == 0.0);
}

TEST_CASE("exponent parsing") {
  const Exponent a = Exponent::parse("2/3");
  CHECK(a.is_rational());
  CHECK(a.numerator() == 2);
  CHECK(a.denominator() == 3);
  CHECK(a.value() == doctest::Approx(2.0 / 3).epsilon(1e-16));
  CHECK(a.to_string() == "2/3");
  const Exponent b = Exponent::parse("0.5");
  CHECK(b.value() == 0.5);
  CHECK(Exponent::parse("0.6667").value() == 0.6667);
  CHECK_THROWS_AS(Exponent::parse("two"), Error);
  CHECK_THROWS_AS(Exponent::parse("1/0"), Error);
  CHECK_THROWS_AS(require_exponent_range(2.0), Error);
  CHECK_THROWS_AS(require_exponent_range(0.0), Error);
  CHECK_NOTHROW(require_exponent_range(1.5));
}

TEST_CASE("method names") {
  for (Method m : {Method::naive, Method::stable, Method::rhp, Method::oracle, Method::backward})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("fast"), Error);
}

TEST_CASE("json round trip") {
  const Lattice L = evolve_stable(Exponent::rational(2, 3), 6);
  const Lattice back = lattice_from_json(lattice_to_json(L));
  CHECK(back.max_index() == 6);
  CHECK(back.method() == Method::stable);
  CHECK(back.exact_exponent().is_rational());
  CHECK(max_difference(L, back, 6) == 0.0);
  // Through text as well.
  const Lattice again = lattice_from_json(nlohmann::json::parse(lattice_to_json(L).dump()));
  CHECK(max_difference(L, again, 6) == 0.0);
}

TEST_CASE("csv layout") {
  const Lattice L = identity_lattice(3);
  std::ostringstream os;
  write_lattice_csv(os, L);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,m,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16);
}
