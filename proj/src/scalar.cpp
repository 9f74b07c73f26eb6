#include "zmap/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "zmap/error.hpp"
#include "zmap/multiprecision.hpp"

namespace zmap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::degenerate_quad: return "DegenerateQuad";
    case ErrorCode::degenerate_stencil: return "DegenerateStencil";
    case ErrorCode::newton_divergence: return "NewtonDivergence";
    case ErrorCode::positivity_violation: return "PositivityViolation";
    case ErrorCode::branch_point_evaluation: return "BranchPointEvaluation";
    case ErrorCode::parity_violation: return "ParityViolation";
    case ErrorCode::geometry_violation: return "GeometryViolation";
    case ErrorCode::ill_conditioned: return "IllConditioned";
    case ErrorCode::residual_too_large: return "ResidualTooLarge";
    case ErrorCode::too_close_to_contour: return "TooCloseToContour";
    case ErrorCode::extraction_degenerate: return "ExtractionDegenerate";
    case ErrorCode::tail_not_resolved: return "TailNotResolved";
    case ErrorCode::shape_violation: return "ShapeViolation";
    case ErrorCode::singular_basis_change: return "SingularBasisChange";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Exponent Exponent::rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "exponent denominator is zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  Exponent e(static_cast<double>(num) / static_cast<double>(den));
  e.num_ = num / g;
  e.den_ = den / g;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  auto parse_long = [](std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorCode::invalid_argument, "malformed exponent '" + std::string(s) + "'");
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return rational(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw Error(ErrorCode::invalid_argument, "malformed exponent '" + buf + "'");
  return Exponent(v);
}

std::string Exponent::to_string() const {
  if (den_ != 0) return std::to_string(num_) + "/" + std::to_string(den_);
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value_);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

void require_exponent_range(double a) {
  if (!(a > 0.0 && a < 2.0))
    throw Error(ErrorCode::invalid_argument, "exponent a must satisfy 0 < a < 2");
}

namespace {
unsigned digits10_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * std::log10(2.0)));
}
}  // namespace

PrecisionGuard::PrecisionGuard(int bits) : previous_digits10_(MpReal::default_precision()) {
  if (bits < 53) throw Error(ErrorCode::invalid_argument, "precision below 53 bits");
  MpReal::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { MpReal::default_precision(previous_digits10_); }

int oracle_precision_bits(int fallback) {
  if (const char* env = std::getenv("ZMAP_PRECISION_BITS")) {
    int bits = 0;
    std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), bits);
    if (ec == std::errc() && ptr == s.data() + s.size() && bits >= 53) return bits;
  }
  return fallback;
}

}  // namespace zmap
