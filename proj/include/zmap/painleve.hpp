#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmap/scalar.hpp"

namespace zmap {

/// Separatrix x_0..x_N of the discrete Painleve II equation that generates
/// the diagonal of Z^a; x_n^2 = (f(n,n+1) - f(n,n)) / (f(n+1,n) - f(n,n)).
struct PainleveSolution {
  double a = 0.0;
  int N = 0;
  std::vector<Complex> x;
  int newton_iters = 0;
  double final_residual = 0.0;

  /// max_n | |x_n| - 1 |
  double max_modulus_defect() const;
};

struct DiagonalTriple {
  Complex f_diag;   // f(n, n)
  Complex f_sub;    // f(n+1, n)
  Complex f_super;  // f(n, n+1)
  double u = 0.0;
  double r = 0.0;
  double g = 0.0;
};

struct NewtonOptions {
  int max_iters = 25;
  double tolerance = 1e-12;
  int max_halvings = 8;
};

/// (n+1)(x^2-1)(x_next - i x)/(i + x x_next) - n(x^2+1)(x_prev + i x)/(i + x_prev x) - a x
Complex dpii_residual(const Complex& x_prev, const Complex& x, const Complex& x_next, int n, double a);

/// The n = 0 case of the recurrence, solved for x_1.
Complex x1_from_x0(const Complex& x0, double a);

/// Large-n expansion of the separatrix through order n^-5.
Complex x_asymptotic(int n, double a);

/// | |x_asymptotic(n, a)| - 1 |, evaluated without the cancellation of forming |x| first.
double asymptotic_modulus_defect(int n, double a);

/// Smallest N >= max(requested_n + 20, 50) at which the expansion has unit
/// modulus to 2.3e-16.
int select_bvp_size(int requested_n, double a);

/// Newton's method on the two-point boundary value problem
///   x_1 = x1_from_x0(x_0), dpii_residual(...) = 0 for 1 <= n < N, x_N = x_asymptotic(N).
/// The Jacobian is tridiagonal and each step costs O(N).
PainleveSolution solve_bvp(double a, int N, const NewtonOptions& options = {});

/// Residual vector of the boundary value system at x (rows 1..N-1 unscaled).
std::vector<Complex> bvp_residual(std::span<const Complex> x, double a);

/// Scaled max-norm used as the Newton stopping test: interior rows divided by n + 1.
double bvp_residual_norm(std::span<const Complex> x, double a);

/// f(n,n), f(n+1,n), f(n,n+1) for n = 0..N from the ratio sequence.
std::vector<DiagonalTriple> reconstruct_diagonals(const PainleveSolution& sol);

void write_painleve_csv(std::ostream& os, const PainleveSolution& sol);
nlohmann::json painleve_diagnostics_json(const PainleveSolution& sol);

}  // namespace zmap
