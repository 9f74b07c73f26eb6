#include "zmap/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "zmap/multiprecision.hpp"

namespace zmap {

namespace {

template <class C>
BasicLattice<C> forward_evolution(const Exponent& a, int N, ForwardVariant variant, Method tag) {
  using Real = real_of_t<C>;
  BasicLattice<C> L(a, N, tag);
  const Real ar = a.as<Real>();
  L(1, 1) = solve_cross_ratio_fourth(L(0, 0), L(1, 0), L(0, 1));

  for (int K = 1; K < N; ++K) {
    L(K + 1, 0) = solve_constraint(K, 0, cross_at(L, K, 0), Slot::east, ar);
    L(0, K + 1) = solve_constraint(0, K, cross_at(L, 0, K), Slot::north, ar);

    if (variant == ForwardVariant::cross_ratio_fill) {
      for (int m = 1; m <= K; ++m) L(K + 1, m) = solve_cross_ratio_fourth(L(K, m - 1), L(K + 1, m - 1), L(K, m));
      for (int n = 1; n <= K; ++n) L(n, K + 1) = solve_cross_ratio_fourth(L(n - 1, K), L(n, K), L(n - 1, K + 1));
    } else {
      for (int m = 1; m < K; ++m) L(K + 1, m) = solve_constraint(K, m, cross_at(L, K, m), Slot::east, ar);
      for (int n = 1; n < K; ++n) L(n, K + 1) = solve_constraint(n, K, cross_at(L, n, K), Slot::north, ar);
      L(K + 1, K) = solve_cross_ratio_fourth(L(K, K - 1), L(K + 1, K - 1), L(K, K));
      L(K, K + 1) = solve_cross_ratio_fourth(L(K - 1, K), L(K, K), L(K - 1, K + 1));
    }
    L(K + 1, K + 1) = solve_cross_ratio_fourth(L(K, K), L(K + 1, K), L(K, K + 1));
  }
  return L;
}

// Seeds the diagonal band from the Painleve solution; returns the triples.
std::vector<DiagonalTriple> seed_diagonals(Lattice& L, const PainleveSolution& sol) {
  const int N = L.max_index();
  if (sol.N < N) throw Error(ErrorCode::invalid_argument, "Painleve solution shorter than the lattice");
  auto tri = reconstruct_diagonals(sol);
  L(1, 1) = tri[1].f_diag;
  for (int k = 1; k < N; ++k) {
    L(k + 1, k + 1) = tri[k + 1].f_diag;
    L(k + 1, k) = tri[k].f_sub;
    L(k, k + 1) = tri[k].f_super;
  }
  return tri;
}

}  // namespace

Lattice evolve_forward_naive(Exponent a, int N, int precision_bits, ForwardVariant variant) {
  require_exponent_range(a.value());
  if (precision_bits <= 53) return forward_evolution<Complex>(a, N, variant, Method::naive);
  PrecisionGuard guard(precision_bits);
  return to_double_lattice(forward_evolution<MpComplex>(a, N, variant, Method::oracle));
}

OracleRun evolve_oracle(Exponent a, int N, int precision_bits) {
  require_exponent_range(a.value());
  PrecisionGuard guard(precision_bits);
  const auto L = forward_evolution<MpComplex>(a, N, ForwardVariant::cross_ratio_fill, Method::oracle);
  const auto res = lattice_residuals(L);
  OracleRun run{to_double_lattice(L), precision_bits, res.cross_ratio.convert_to<double>(),
                res.constraint.convert_to<double>(), symmetry_defect(L).convert_to<double>()};
  return run;
}

Lattice evolve_stable(Exponent a, int N) {
  require_exponent_range(a.value());
  const auto sol = solve_bvp(a.value(), select_bvp_size(N, a.value()));
  return evolve_stable(a, N, sol);
}

Lattice evolve_stable(Exponent a, int N, const PainleveSolution& sol) {
  require_exponent_range(a.value());
  Lattice L(a, N, Method::stable);
  seed_diagonals(L, sol);
  const double av = a.value();
  for (int k = 1; k < N; ++k) {
    for (int m = k - 1; m >= 0; --m) L(k + 1, m) = solve_constraint(k, m, cross_at(L, k, m), Slot::east, av);
    for (int n = k - 1; n >= 0; --n) L(n, k + 1) = solve_constraint(n, k, cross_at(L, n, k), Slot::north, av);
  }
  return L;
}

Lattice evolve_backward_crossratio(Exponent a, int N) {
  require_exponent_range(a.value());
  const auto sol = solve_bvp(a.value(), select_bvp_size(N, a.value()));
  Lattice L(a, N, Method::backward);
  seed_diagonals(L, sol);
  for (int k = 1; k < N; ++k) {
    for (int m = k - 1; m >= 0; --m) L(k + 1, m) = solve_cross_ratio_fourth(L(k, m + 1), L(k, m), L(k + 1, m + 1));
    for (int n = k - 1; n >= 0; --n) L(n, k + 1) = solve_cross_ratio_fourth(L(n + 1, k), L(n, k), L(n + 1, k + 1));
  }
  return L;
}

ForwardPainleve dpii_forward_unstable(double a, int N) {
  require_exponent_range(a);
  if (N < 1) throw Error(ErrorCode::invalid_argument, "forward recursion needs N >= 1");
  ForwardPainleve out;
  out.x.resize(static_cast<std::size_t>(N) + 1);
  out.x[0] = std::polar(1.0, a * kPi / 4.0);
  out.x[1] = x1_from_x0(out.x[0], a);
  for (int n = 1; n < N; ++n) {
    const Complex& prev = out.x[n - 1];
    const Complex& x = out.x[n];
    // dpii_residual = (n+1) P(x, y) - rest with rest = n Q(prev, x) + a x; solve for y.
    const Complex rest = static_cast<double>(n) * (x * x + 1.0) * (prev + kI * x) / (kI + prev * x) + a * x;
    const Complex alpha = static_cast<double>(n + 1) * (x * x - 1.0);
    const Complex den = alpha - rest * x;
    if (is_vanishing(den, std::max(std::abs(alpha), std::abs(rest))))
      throw Error(ErrorCode::degenerate_stencil, "forward Painleve step with vanishing denominator at n = " +
                                                     std::to_string(n));
    out.x[n + 1] = kI * (rest + alpha * x) / den;
  }
  out.modulus_error.reserve(out.x.size());
  for (const auto& v : out.x) out.modulus_error.push_back(std::abs(std::abs(v) - 1.0));
  return out;
}

EvolutionReport make_evolution_report(Lattice lattice, const Lattice& reference) {
  const int N = lattice.max_index();
  if (reference.max_index() < N) throw Error(ErrorCode::invalid_argument, "reference lattice too small");
  std::vector<double> err;
  err.reserve(static_cast<std::size_t>(std::max(N - 1, 0)));
  for (int n = 2; n <= N; ++n) err.push_back(std::abs(lattice(n, n) - reference(n, n)));
  const Method method = lattice.method();
  return {std::move(lattice), std::move(err), method};
}

void write_error_series(std::ostream& os, int first_n, const std::vector<double>& errors) {
  os << "n,error\n";
  char buf[64];
  for (std::size_t k = 0; k < errors.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", first_n + static_cast<int>(k), errors[k]);
    os << buf;
  }
}

}  // namespace zmap
