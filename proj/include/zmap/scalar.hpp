#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>

namespace zmap {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

/// Relative threshold below which a denominator counts as vanishing.
inline constexpr double kDegeneracyEps = 1e-14;

template <class C>
using real_of_t = typename C::value_type;

/// Lattice exponent. Keeps an exact rational form when one is known so that
/// extended-precision runs do not inherit the rounding of a double literal.
class Exponent {
 public:
  Exponent(double value) : value_(value) {}  // NOLINT: implicit by intent

  static Exponent rational(long num, long den);

  /// Accepts "p/q" or a decimal literal.
  static Exponent parse(std::string_view text);

  double value() const noexcept { return value_; }
  bool is_rational() const noexcept { return den_ != 0; }
  long numerator() const noexcept { return num_; }
  long denominator() const noexcept { return den_; }

  template <class Real>
  Real as() const {
    if (den_ != 0) return Real(num_) / Real(den_);
    return Real(value_);
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  long num_ = 0;
  long den_ = 0;
};

/// Throws invalid_argument unless 0 < a < 2.
void require_exponent_range(double a);

/// e^{i theta} in the complex type C.
template <class C>
C unit_phase(const real_of_t<C>& theta) {
  using std::cos;
  using std::sin;
  return C(cos(theta), sin(theta));
}

template <class Real>
Real pi_as();

/// e^{i a pi / 2}, exact when a is an integer.
template <class C>
C quarter_turn_phase(const Exponent& a) {
  using Real = real_of_t<C>;
  const double v = a.value();
  if (v == std::floor(v) && std::abs(v) < 1e9) {
    switch (((static_cast<long>(v) % 4) + 4) % 4) {
      case 0: return C(Real(1), Real(0));
      case 1: return C(Real(0), Real(1));
      case 2: return C(Real(-1), Real(0));
      default: return C(Real(0), Real(-1));
    }
  }
  return unit_phase<C>(a.as<Real>() * pi_as<Real>() / Real(2));
}

template <>
inline double pi_as<double>() {
  return kPi;
}

inline bool is_finite(const Complex& z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace zmap
