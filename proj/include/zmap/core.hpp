#pragma once

#include <algorithm>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmap/error.hpp"
#include "zmap/scalar.hpp"

namespace zmap {

enum class Method { naive, stable, rhp, oracle, backward };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

/// Square grid f(n, m), 0 <= n, m <= N, seeded with the initial values
/// f(0,0) = 0, f(1,0) = 1, f(0,1) = e^{i a pi / 2}.
template <class C>
class BasicLattice {
 public:
  using value_type = C;

  BasicLattice(Exponent a, int max_index, Method method)
      : a_(a), max_index_(max_index), method_(method),
        values_(static_cast<std::size_t>(max_index + 1) * static_cast<std::size_t>(max_index + 1)) {
    if (max_index < 1) throw Error(ErrorCode::invalid_argument, "lattice needs N >= 1");
    using Real = real_of_t<C>;
    (*this)(0, 0) = C(Real(0), Real(0));
    (*this)(1, 0) = C(Real(1), Real(0));
    (*this)(0, 1) = quarter_turn_phase<C>(a);
  }

  int max_index() const noexcept { return max_index_; }
  double exponent() const noexcept { return a_.value(); }
  const Exponent& exact_exponent() const noexcept { return a_; }
  Method method() const noexcept { return method_; }

  C& operator()(int n, int m) { return values_[index(n, m)]; }
  const C& operator()(int n, int m) const { return values_[index(n, m)]; }

  bool contains(int n, int m) const noexcept {
    return n >= 0 && m >= 0 && n <= max_index_ && m <= max_index_;
  }

 private:
  std::size_t index(int n, int m) const noexcept {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(max_index_ + 1) + static_cast<std::size_t>(m);
  }

  Exponent a_;
  int max_index_;
  Method method_;
  std::vector<C> values_;
};

using Lattice = BasicLattice<Complex>;

template <class C>
bool is_vanishing(const C& denominator, const real_of_t<C>& scale) {
  using std::abs;
  using Real = real_of_t<C>;
  return abs(denominator) < Real(kDegeneracyEps) * std::max(scale, Real(1));
}

template <class C>
real_of_t<C> max_magnitude(std::initializer_list<C> values) {
  using std::abs;
  real_of_t<C> s(0);
  for (const auto& v : values) s = std::max(s, real_of_t<C>(abs(v)));
  return s;
}

/// Cross ratio of the quad (f(n,m), f(n+1,m), f(n+1,m+1), f(n,m+1)) = (A, B, D, C).
template <class C>
C cross_ratio(const C& A, const C& B, const C& D, const C& C4) {
  const auto scale = max_magnitude<C>({A, B, C4, D});
  const C d1 = B - D;
  const C d2 = C4 - A;
  if (is_vanishing(d1, scale) || is_vanishing(d2, scale))
    throw Error(ErrorCode::degenerate_quad, "cross ratio of a degenerate quadrilateral");
  return (A - B) * (D - C4) / (d1 * d2);
}

/// Corner D of the quad with cross ratio -1, given the opposite corner A and
/// the two neighbours B, C. The relation is symmetric, so the same formula
/// solves for any corner in terms of its opposite and its neighbours.
template <class C>
C solve_cross_ratio_fourth(const C& A, const C& B, const C& C3) {
  const auto scale = max_magnitude<C>({A, B, C3});
  const C den = C(2) * A - B - C3;
  if (is_vanishing(den, scale))
    throw Error(ErrorCode::degenerate_quad, "cross-ratio solve with vanishing denominator 2A - B - C");
  return (A * (B + C3) - C(2) * B * C3) / den;
}

/// Five-point cross around f(n, m). Entries outside the quadrant are ignored.
template <class C>
struct Cross {
  C center;
  C west;   // f(n-1, m)
  C east;   // f(n+1, m)
  C south;  // f(n, m-1)
  C north;  // f(n, m+1)
};

enum class Slot { east, north };

namespace detail {

// 2k (p - f)(f - q) / (p - q), the one-directional half of the constraint.
template <class C>
C constraint_term(int k, const C& f, const C& p, const C& q) {
  const auto scale = max_magnitude<C>({f, p, q});
  const C den = p - q;
  if (is_vanishing(den, scale))
    throw Error(ErrorCode::degenerate_stencil, "constraint stencil with coincident opposite neighbours");
  return C(2 * k) * (p - f) * (f - q) / den;
}

// Solves a f = 2k (x - f)(f - q)/(x - q) + rest for x, with S = a f - rest.
template <class C>
C solve_constraint_direction(int k, const C& f, const C& q, const C& S) {
  const auto scale = max_magnitude<C>({f, q, S});
  const C two_k(2 * k);
  const C den = two_k * (f - q) - S;
  if (is_vanishing(den, scale))
    throw Error(ErrorCode::degenerate_stencil, "constraint solve with vanishing denominator");
  return (two_k * f * (f - q) - S * q) / den;
}

}  // namespace detail

/// Value in the unknown slot making the discrete z f_z = a f constraint hold
/// at (n, m). Along m = 0 (east) or n = 0 (north) the stencil is one-dimensional.
template <class C>
C solve_constraint(int n, int m, const Cross<C>& s, Slot unknown, const real_of_t<C>& a) {
  if (n < 0 || m < 0) throw Error(ErrorCode::invalid_argument, "negative lattice index");
  const C af = C(a) * s.center;
  if (unknown == Slot::east) {
    if (n == 0) throw Error(ErrorCode::degenerate_stencil, "east solve at n = 0 does not involve f(1, m)");
    const C S = m == 0 ? af : af - detail::constraint_term(m, s.center, s.north, s.south);
    return detail::solve_constraint_direction(n, s.center, s.west, S);
  }
  if (m == 0) throw Error(ErrorCode::degenerate_stencil, "north solve at m = 0 does not involve f(n, 1)");
  const C S = n == 0 ? af : af - detail::constraint_term(n, s.center, s.east, s.west);
  return detail::solve_constraint_direction(m, s.center, s.south, S);
}

/// |LHS - RHS| / (1 + |a f|) of the constraint at (n, m).
template <class C>
real_of_t<C> constraint_residual(int n, int m, const Cross<C>& s, const real_of_t<C>& a) {
  using std::abs;
  using Real = real_of_t<C>;
  const C af = C(a) * s.center;
  C rhs(0);
  if (n > 0) rhs += detail::constraint_term(n, s.center, s.east, s.west);
  if (m > 0) rhs += detail::constraint_term(m, s.center, s.north, s.south);
  return Real(abs(af - rhs)) / (Real(1) + Real(abs(af)));
}

template <class C>
Cross<C> cross_at(const BasicLattice<C>& L, int n, int m) {
  Cross<C> s{L(n, m), C(0), C(0), C(0), C(0)};
  if (n > 0) s.west = L(n - 1, m);
  if (n < L.max_index()) s.east = L(n + 1, m);
  if (m > 0) s.south = L(n, m - 1);
  if (m < L.max_index()) s.north = L(n, m + 1);
  return s;
}

template <class Real>
struct Residuals {
  Real cross_ratio;
  Real constraint;
};

/// Worst cross-ratio defect |cr + 1| over all cells and worst normalised
/// constraint defect over all stencils whose five points lie in the lattice.
template <class C>
Residuals<real_of_t<C>> lattice_residuals(const BasicLattice<C>& L) {
  using std::abs;
  using Real = real_of_t<C>;
  const Real a = L.exact_exponent().template as<Real>();
  Residuals<Real> r{Real(0), Real(0)};
  const int N = L.max_index();
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < N; ++m) {
      try {
        const C cr = cross_ratio(L(n, m), L(n + 1, m), L(n + 1, m + 1), L(n, m + 1));
        r.cross_ratio = std::max(r.cross_ratio, Real(abs(cr + C(1))));
        r.constraint = std::max(r.constraint, constraint_residual(n, m, cross_at(L, n, m), a));
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " at cell (" + std::to_string(n) + "," + std::to_string(m) + ")");
      }
    }
  }
  return r;
}

/// max |f(m,n) - e^{i a pi/2} conj(f(n,m))| over the lattice.
template <class C>
real_of_t<C> symmetry_defect(const BasicLattice<C>& L) {
  using std::abs;
  using Real = real_of_t<C>;
  const C phase = quarter_turn_phase<C>(L.exact_exponent());
  Real worst(0);
  for (int n = 0; n <= L.max_index(); ++n)
    for (int m = 0; m <= L.max_index(); ++m)
      worst = std::max(worst, Real(abs(L(m, n) - phase * conj(L(n, m)))));
  return worst;
}

template <class C>
Lattice to_double_lattice(const BasicLattice<C>& L) {
  Lattice out(L.exact_exponent(), L.max_index(), L.method());
  for (int n = 0; n <= L.max_index(); ++n)
    for (int m = 0; m <= L.max_index(); ++m) out(n, m) = to_double(L(n, m));
  return out;
}

/// max |A(n,m) - B(n,m)| over 0 <= n, m <= upto.
double max_difference(const Lattice& A, const Lattice& B, int upto);

struct AsymptoticParams {
  double a;
  Complex c_a;
};

/// c_a = Gamma(1 - a/2) / Gamma(1 + a/2).
double asymptotic_constant(double a);
AsymptoticParams asymptotic_params(double a);

/// Leading-order large-index behaviour c_a ((n + i m)/2)^a, principal branch.
Complex asymptotic_value(int n, int m, double a);

void write_lattice_csv(std::ostream& os, const Lattice& L);
nlohmann::json lattice_to_json(const Lattice& L);
Lattice lattice_from_json(const nlohmann::json& j);

}  // namespace zmap
