#include "zmap/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zmap/core.hpp"
#include "zmap/error.hpp"
#include "zmap/linalg.hpp"

namespace zmap {

namespace {

const Complex kEighthTurn = std::polar(1.0, kPi / 4.0);

// The two rational pieces of the recurrence and their partial derivatives:
//   P(x, y) = (x^2 - 1)(y - i x) / (i + x y)
//   Q(w, x) = (x^2 + 1)(w + i x) / (i + w x)
struct Rational2 {
  Complex value, d_first, d_second;
};

Complex checked_denominator(const Complex& den, const Complex& p, const Complex& q) {
  if (is_vanishing(den, std::abs(p) * std::abs(q)))
    throw Error(ErrorCode::degenerate_stencil, "vanishing denominator i + x_k x_{k+1} in Painleve recurrence");
  return den;
}

Rational2 forward_piece(const Complex& x, const Complex& y) {
  const Complex den = checked_denominator(kI + x * y, x, y);
  const Complex x2m1 = x * x - 1.0;
  const Complex num = x2m1 * (y - kI * x);
  const Complex den2 = den * den;
  return {num / den,
          ((2.0 * x * (y - kI * x) - kI * x2m1) * den - num * y) / den2,
          kI * x2m1 * (1.0 + x * x) / den2};
}

Rational2 backward_piece(const Complex& w, const Complex& x) {
  const Complex den = checked_denominator(kI + w * x, w, x);
  const Complex x2p1 = x * x + 1.0;
  const Complex num = x2p1 * (w + kI * x);
  const Complex den2 = den * den;
  return {num / den,
          kI * x2p1 * (1.0 - x * x) / den2,
          ((2.0 * x * (w + kI * x) + kI * x2p1) * den - num * w) / den2};
}

struct Series {
  Complex c[5];
};

Series expansion_coefficients(double a) {
  const Complex i = kI;
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
  Series s;
  s.c[0] = i * (a - 1.0) / 2.0;
  s.c[1] = (-a2 + (2.0 - 2.0 * i) * a - (1.0 - 2.0 * i)) / 8.0;
  s.c[2] = -i * (a3 - (3.0 - 2.0 * i) * a2 - (1.0 + 4.0 * i) * a + (3.0 + 2.0 * i)) / 16.0;
  s.c[3] = (3.0 * a4 - (12.0 - 12.0 * i) * a3 - (2.0 + 36.0 * i) * a2 + (28.0 + 4.0 * i) * a - (17.0 - 20.0 * i)) /
           128.0;
  s.c[4] = i *
           (3.0 * a5 - (15.0 - 12.0 * i) * a4 - (30.0 + 48.0 * i) * a3 + (150.0 + 24.0 * i) * a2 -
            (5.0 - 48.0 * i) * a - (103.0 + 36.0 * i)) /
           256.0;
  return s;
}

// Correction s in x_{n,6} = e^{i pi/4} (1 + s).
Complex expansion_correction(int n, double a) {
  const Series s = expansion_coefficients(a);
  const double t = 1.0 / n;
  Complex acc = 0.0;
  for (int k = 4; k >= 0; --k) acc = (acc + s.c[k]) * t;
  return acc;
}

}  // namespace

double PainleveSolution::max_modulus_defect() const {
  double worst = 0.0;
  for (const auto& v : x) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
  return worst;
}

Complex dpii_residual(const Complex& x_prev, const Complex& x, const Complex& x_next, int n, double a) {
  Complex r = static_cast<double>(n + 1) * forward_piece(x, x_next).value - a * x;
  if (n != 0) r -= static_cast<double>(n) * backward_piece(x_prev, x).value;
  return r;
}

Complex x1_from_x0(const Complex& x0, double a) {
  const Complex x2 = x0 * x0;
  const Complex den = kI * ((a - 1.0) * x2 + 1.0);
  if (is_vanishing(den, std::abs(x2)))
    throw Error(ErrorCode::degenerate_stencil, "x1 formula with vanishing denominator (a-1)x0^2 + 1");
  return x0 * (x2 + a - 1.0) / den;
}

Complex x_asymptotic(int n, double a) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "expansion needs n >= 1");
  return kEighthTurn * (1.0 + expansion_correction(n, a));
}

double asymptotic_modulus_defect(int n, double a) {
  const Complex s = expansion_correction(n, a);
  // |1 + s|^2 - 1 = 2 Re s + |s|^2
  const double excess = 2.0 * s.real() + std::norm(s);
  return std::abs(excess) / (1.0 + std::abs(1.0 + s));
}

int select_bvp_size(int requested_n, double a) {
  constexpr int kMargin = 20;
  constexpr int kFloor = 50;
  constexpr int kCap = 100000;
  constexpr double kUnitTol = 2.3e-16;
  for (int N = std::max(requested_n + kMargin, kFloor); N < kCap; ++N)
    if (asymptotic_modulus_defect(N, a) <= kUnitTol) return N;
  return kCap;
}

std::vector<Complex> bvp_residual(std::span<const Complex> x, double a) {
  const std::size_t size = x.size();
  const int N = static_cast<int>(size) - 1;
  std::vector<Complex> F(size);
  F[0] = x[1] - x1_from_x0(x[0], a);
  for (int n = 1; n < N; ++n) F[n] = dpii_residual(x[n - 1], x[n], x[n + 1], n, a);
  F[N] = x[N] - x_asymptotic(N, a);
  return F;
}

double bvp_residual_norm(std::span<const Complex> x, double a) {
  const auto F = bvp_residual(x, a);
  const int N = static_cast<int>(F.size()) - 1;
  double worst = std::max(std::abs(F[0]), std::abs(F[N]));
  for (int n = 1; n < N; ++n) worst = std::max(worst, std::abs(F[n]) / (n + 1));
  return worst;
}

PainleveSolution solve_bvp(double a, int N, const NewtonOptions& options) {
  require_exponent_range(a);
  if (N < 10) throw Error(ErrorCode::invalid_argument, "boundary value problem needs N >= 10");

  const std::size_t size = static_cast<std::size_t>(N) + 1;
  std::vector<Complex> x(size);
  x[0] = std::polar(1.0, a * kPi / 4.0);
  for (int n = 1; n <= N; ++n) x[n] = x_asymptotic(n, a);

  std::vector<Complex> lower(size - 1), diag(size), upper(size - 1), rhs(size), trial(size);
  double norm = bvp_residual_norm(x, a);
  int iters = 0;

  auto newton_step = [&](const std::vector<Complex>& F) {
    // Row 0: x_1 - h(x_0), h the x1 formula.
    {
      const Complex x2 = x[0] * x[0];
      const Complex q = (a - 1.0) * x2 + 1.0;
      const Complex dh = ((3.0 * x2 + a - 1.0) * q - 2.0 * (a - 1.0) * x2 * (x2 + a - 1.0)) / (kI * q * q);
      diag[0] = -dh;
      upper[0] = 1.0;
    }
    for (int n = 1; n < N; ++n) {
      const Rational2 P = forward_piece(x[n], x[n + 1]);
      const Rational2 Q = backward_piece(x[n - 1], x[n]);
      lower[n - 1] = -static_cast<double>(n) * Q.d_first;
      diag[n] = static_cast<double>(n + 1) * P.d_first - static_cast<double>(n) * Q.d_second - a;
      upper[n] = static_cast<double>(n + 1) * P.d_second;
    }
    lower[N - 1] = 0.0;
    diag[N] = 1.0;
    for (std::size_t k = 0; k < size; ++k) rhs[k] = -F[k];
    return solve_tridiagonal(lower, diag, upper, rhs);
  };

  while (norm > options.tolerance) {
    if (iters >= options.max_iters)
      throw Error(ErrorCode::newton_divergence,
                  "Newton did not reach tolerance within " + std::to_string(options.max_iters) + " iterations");
    const auto step = newton_step(bvp_residual(x, a));
    ++iters;

    double t = 1.0;
    double trial_norm = 0.0;
    for (int h = 0;; ++h) {
      for (std::size_t k = 0; k < size; ++k) trial[k] = x[k] + t * step[k];
      try {
        trial_norm = bvp_residual_norm(trial, a);
      } catch (const Error&) {
        trial_norm = INFINITY;
      }
      if (trial_norm < norm || h >= options.max_halvings) break;
      t *= 0.5;
    }
    if (!std::isfinite(trial_norm))
      throw Error(ErrorCode::newton_divergence, "Newton step left the domain of the recurrence");
    x.swap(trial);
    norm = trial_norm;
  }

  // One polishing step takes the iterate from the stopping tolerance to roundoff.
  if (iters > 0) {
    const auto step = newton_step(bvp_residual(x, a));
    for (std::size_t k = 0; k < size; ++k) trial[k] = x[k] + step[k];
    const double polished = bvp_residual_norm(trial, a);
    if (polished <= norm) {
      x.swap(trial);
      norm = polished;
      ++iters;
    }
  }

  PainleveSolution sol;
  sol.a = a;
  sol.N = N;
  sol.x = std::move(x);
  sol.newton_iters = iters;
  sol.final_residual = norm;
  return sol;
}

std::vector<DiagonalTriple> reconstruct_diagonals(const PainleveSolution& sol) {
  const Complex phase = std::polar(1.0, sol.a * kPi / 4.0);
  std::vector<DiagonalTriple> out(sol.x.size());
  double r = 1.0;
  double g = 0.0;
  for (std::size_t n = 0; n < sol.x.size(); ++n) {
    const Complex& xn = sol.x[n];
    if (!(xn.real() > 0.0) || !(xn.imag() > 0.0))
      throw Error(ErrorCode::positivity_violation, "x_" + std::to_string(n) + " leaves the first quadrant");
    const double u = r / xn.real();
    const Complex f_nn = g * phase;
    const Complex f_next = (g + u) * phase;
    const Complex x2 = xn * xn;
    out[n] = {f_nn, ((x2 - 1.0) * f_nn + (x2 + 1.0) * f_next) / (2.0 * x2),
              ((1.0 - x2) * f_nn + (1.0 + x2) * f_next) / 2.0, u, r, g};
    r = u * xn.imag();
    g += u;
  }
  return out;
}

void write_painleve_csv(std::ostream& os, const PainleveSolution& sol) {
  os << "n,re,im,abs_err_modulus\n";
  char buf[128];
  for (std::size_t n = 0; n < sol.x.size(); ++n) {
    const Complex& v = sol.x[n];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", n, v.real(), v.imag(), std::abs(std::abs(v) - 1.0));
    os << buf;
  }
}

nlohmann::json painleve_diagnostics_json(const PainleveSolution& sol) {
  return {{"a", sol.a}, {"N", sol.N}, {"iters", sol.newton_iters}, {"final_residual", sol.final_residual}};
}

}  // namespace zmap
