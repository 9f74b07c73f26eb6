#include "zmap/core.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace zmap {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::naive: return "naive";
    case Method::stable: return "stable";
    case Method::rhp: return "rhp";
    case Method::oracle: return "oracle";
    case Method::backward: return "backward";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::naive, Method::stable, Method::rhp, Method::oracle, Method::backward})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(name) + "'");
}

double max_difference(const Lattice& A, const Lattice& B, int upto) {
  if (upto > A.max_index() || upto > B.max_index())
    throw Error(ErrorCode::invalid_argument, "comparison range exceeds lattice size");
  double worst = 0.0;
  for (int n = 0; n <= upto; ++n)
    for (int m = 0; m <= upto; ++m) worst = std::max(worst, std::abs(A(n, m) - B(n, m)));
  return worst;
}

double asymptotic_constant(double a) {
  return std::tgamma(1.0 - a / 2.0) / std::tgamma(1.0 + a / 2.0);
}

AsymptoticParams asymptotic_params(double a) {
  require_exponent_range(a);
  return {a, Complex(asymptotic_constant(a), 0.0)};
}

Complex asymptotic_value(int n, int m, double a) {
  if (n == 0 && m == 0) throw Error(ErrorCode::invalid_argument, "asymptotic value undefined at the origin");
  const Complex w(0.5 * n, 0.5 * m);
  return asymptotic_constant(a) * std::pow(w, a);
}

void write_lattice_csv(std::ostream& os, const Lattice& L) {
  os << "n,m,re,im\n";
  char buf[96];
  for (int n = 0; n <= L.max_index(); ++n) {
    for (int m = 0; m <= L.max_index(); ++m) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", n, m, L(n, m).real(), L(n, m).imag());
      os << buf;
    }
  }
}

nlohmann::json lattice_to_json(const Lattice& L) {
  nlohmann::json values = nlohmann::json::array();
  for (int n = 0; n <= L.max_index(); ++n)
    for (int m = 0; m <= L.max_index(); ++m)
      values.push_back({n, m, L(n, m).real(), L(n, m).imag()});
  return {{"a", L.exponent()},
          {"a_text", L.exact_exponent().to_string()},
          {"N", L.max_index()}, {"method", std::string(to_string(L.method()))}, {"values", values}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
  const Exponent a = j.contains("a_text") ? Exponent::parse(j.at("a_text").get<std::string>())
                                          : Exponent(j.at("a").get<double>());
  Lattice L(a, j.at("N").get<int>(), parse_method(j.at("method").get<std::string>()));
  for (const auto& v : j.at("values")) {
    const int n = v.at(0).get<int>();
    const int m = v.at(1).get<int>();
    if (!L.contains(n, m)) throw Error(ErrorCode::invalid_argument, "lattice JSON index out of range");
    L(n, m) = Complex(v.at(2).get<double>(), v.at(3).get<double>());
  }
  return L;
}

}  // namespace zmap
