#pragma once

#include <iosfwd>
#include <vector>

#include "zmap/core.hpp"
#include "zmap/painleve.hpp"

namespace zmap {

/// How the naive forward evolution fills each new row and column.
enum class ForwardVariant {
  cross_ratio_fill,  ///< boundary by the constraint, everything else by cross ratios
  constraint_fill,   ///< constraint up to the first off-diagonals, cross ratios for the rest
};

/// Grows the lattice from the three initial values square by square. In
/// double precision this is numerically unstable along the diagonal; run at
/// precision_bits > 53 it is used as an extended-precision oracle and the
/// result carries Method::oracle.
Lattice evolve_forward_naive(Exponent a, int N, int precision_bits = 53,
                             ForwardVariant variant = ForwardVariant::cross_ratio_fill);

struct OracleRun {
  Lattice lattice;
  int precision_bits = 0;
  // Residuals evaluated in the working precision before rounding to double.
  double cross_ratio_residual = 0.0;
  double constraint_residual = 0.0;
  double symmetry_defect = 0.0;
};

OracleRun evolve_oracle(Exponent a, int N, int precision_bits = 256);

/// Diagonal, sub- and superdiagonal from the Painleve boundary value
/// problem; the rest by constraint solves sweeping from the diagonal to the
/// boundary.
Lattice evolve_stable(Exponent a, int N);
Lattice evolve_stable(Exponent a, int N, const PainleveSolution& sol);

/// Same seeding as evolve_stable, but filled outward with cross-ratio
/// solves. Loses accuracy toward the boundary.
Lattice evolve_backward_crossratio(Exponent a, int N);

struct ForwardPainleve {
  std::vector<Complex> x;
  std::vector<double> modulus_error;  // | |x_n| - 1 |
};

/// Forward recursion of discrete Painleve II from x_0 = e^{i a pi/4} and x_1.
ForwardPainleve dpii_forward_unstable(double a, int N);

struct EvolutionReport {
  Lattice lattice;
  std::vector<double> diagonal_error;  // |f(n,n) - ref(n,n)| for n = 2..N
  Method method;
};

EvolutionReport make_evolution_report(Lattice lattice, const Lattice& reference);

/// CSV with header "n,error"; row k is index first_n + k.
void write_error_series(std::ostream& os, int first_n, const std::vector<double>& errors);

}  // namespace zmap
