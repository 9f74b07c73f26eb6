#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "zmap/scalar.hpp"

namespace zmap {

using MpReal = boost::multiprecision::mpfr_float;

template <>
inline MpReal pi_as<MpReal>() {
  MpReal result;
  mpfr_const_pi(result.backend().data(), MPFR_RNDN);
  return result;
}

/// Sets the working precision of newly created MpReal values for the
/// lifetime of the guard and restores the previous one afterwards.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned previous_digits10_;
};

/// Precision for oracle runs: ZMAP_PRECISION_BITS if set and valid, else fallback.
int oracle_precision_bits(int fallback = 256);

/// Minimal complex number over MpReal. std::complex is unspecified for
/// non-builtin value types, so the oracle carries its own.
class MpComplex {
 public:
  using value_type = MpReal;

  MpComplex() : re_(0), im_(0) {}
  MpComplex(MpReal re) : re_(std::move(re)), im_(0) {}  // NOLINT
  MpComplex(MpReal re, MpReal im) : re_(std::move(re)), im_(std::move(im)) {}
  MpComplex(int re) : re_(re), im_(0) {}  // NOLINT
  explicit MpComplex(const Complex& z) : re_(z.real()), im_(z.imag()) {}

  const MpReal& real() const { return re_; }
  const MpReal& imag() const { return im_; }

  MpComplex& operator+=(const MpComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  MpComplex& operator-=(const MpComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  MpComplex& operator*=(const MpComplex& o) {
    MpReal re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  MpComplex& operator/=(const MpComplex& o) {
    MpReal den = o.re_ * o.re_ + o.im_ * o.im_;
    MpReal re = (re_ * o.re_ + im_ * o.im_) / den;
    im_ = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    return *this;
  }

  friend MpComplex operator+(MpComplex a, const MpComplex& b) { return a += b; }
  friend MpComplex operator-(MpComplex a, const MpComplex& b) { return a -= b; }
  friend MpComplex operator*(MpComplex a, const MpComplex& b) { return a *= b; }
  friend MpComplex operator/(MpComplex a, const MpComplex& b) { return a /= b; }
  friend MpComplex operator-(const MpComplex& a) { return {-a.re_, -a.im_}; }

  friend MpReal abs(const MpComplex& z) { return boost::multiprecision::sqrt(z.re_ * z.re_ + z.im_ * z.im_); }
  friend MpComplex conj(const MpComplex& z) { return {z.re_, -z.im_}; }

  Complex to_double() const { return {re_.convert_to<double>(), im_.convert_to<double>()}; }

 private:
  MpReal re_;
  MpReal im_;
};

inline Complex to_double(const MpComplex& z) { return z.to_double(); }
inline Complex to_double(const Complex& z) { return z; }

}  // namespace zmap
