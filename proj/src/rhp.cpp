#include "zmap/rhp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zmap/error.hpp"

namespace zmap {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Complex ipow(Complex z, int k) {
  if (k < 0) {
    z = 1.0 / z;
    k = -k;
  }
  Complex result = 1.0;
  while (k > 0) {
    if (k & 1) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

Matrix2 mat2(Complex a11, Complex a12, Complex a21, Complex a22) {
  Matrix2 M;
  M << a11, a12, a21, a22;
  return M;
}

constexpr double kBranchTol = 1e-14;
constexpr double kDiagonalTol = 1e-8;
constexpr double kContourClearance = 0.05;

void check_branch_points(const Complex& zeta) {
  for (const Complex p : {Complex(1.0), Complex(-1.0), Complex(0.0)})
    if (std::abs(zeta - p) < kBranchTol)
      throw Error(ErrorCode::branch_point_evaluation, "jump matrix evaluated at a branch point");
}

// 21-entry of G1 and its logarithmic derivative.
Complex g1_entry(const Complex& zeta, int n, int m, double a) {
  check_branch_points(zeta);
  return std::polar(1.0, a * kPi / 4.0) * std::exp(-0.5 * a * std::log(zeta / kI)) * ipow(zeta - 1.0, -m) *
         ipow(zeta + 1.0, -n);
}

Complex g1_log_derivative(const Complex& zeta, int n, int m, double a) {
  return -0.5 * a / zeta - static_cast<double>(m) / (zeta - 1.0) - static_cast<double>(n) / (zeta + 1.0);
}

int half_degree(int n, int m) {
  if ((n + m) % 2 != 0)
    throw Error(ErrorCode::parity_violation, "n + m must be even (got n=" + std::to_string(n) +
                                                 ", m=" + std::to_string(m) + ")");
  return (n + m) / 2;
}

void check_disjoint(const OrientedCircle& p, const OrientedCircle& q) {
  const double d = std::abs(p.center - q.center);
  const bool separate = d > p.radius + q.radius;
  const bool nested = d < std::abs(p.radius - q.radius);
  if (!separate && !nested) throw Error(ErrorCode::geometry_violation, "contour circles intersect");
}

struct NodeJumps {
  std::vector<Matrix2> G, Ginv, dG;
};

NodeJumps jumps_at_nodes(const ContourSystem& S, const Discretization& d) {
  NodeJumps J;
  const std::size_t M = d.nodes.size();
  J.G.resize(M);
  J.Ginv.resize(M);
  J.dG.resize(M);
  for (std::size_t j = 0; j < M; ++j) {
    const auto& jump = S.circles()[d.circle[j]].jump;
    J.G[j] = jump.value(d.nodes[j]);
    J.Ginv[j] = jump.inverse(d.nodes[j]);
    J.dG[j] = jump.derivative(d.nodes[j]);
  }
  return J;
}

Matrix2 kernel_from_jumps(const NodeJumps& J, const Discretization& d, std::size_t i, std::size_t j,
                          double radius_i) {
  const Complex diff = d.nodes[j] - d.nodes[i];
  if (std::abs(diff) < kDiagonalTol * radius_i) return J.Ginv[i] * J.dG[i];
  return J.Ginv[i] * (J.G[j] - J.G[i]) / diff;
}

double max_entry(const std::vector<Matrix2>& v) {
  double worst = 0.0;
  for (const auto& M : v) worst = std::max(worst, M.cwiseAbs().maxCoeff());
  return worst;
}

// max_i |Phi(zeta_i) - sum_j w_j K(zeta_i, zeta_j) Phi(zeta_j) - I| over the rows listed.
double fredholm_defect(const ContourSystem& S, const Discretization& d, const std::vector<Matrix2>& phi,
                       const std::vector<std::size_t>& rows) {
  const NodeJumps J = jumps_at_nodes(S, d);
  double worst = 0.0;
  for (std::size_t i : rows) {
    const double radius = S.circles()[d.circle[i]].geometry.radius;
    Matrix2 acc = phi[i] - Matrix2::Identity();
    for (std::size_t j = 0; j < d.nodes.size(); ++j)
      acc -= d.weights[j] * kernel_from_jumps(J, d, i, j, radius) * phi[j];
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst / std::max(1.0, max_entry(phi));
}

}  // namespace

ContourSystem::ContourSystem(std::vector<ContourCircle> circles, int condition_count, std::size_t condition_circle)
    : circles_(std::move(circles)), condition_count_(condition_count), condition_circle_(condition_circle) {
  if (circles_.empty()) throw Error(ErrorCode::geometry_violation, "contour system without circles");
  if (condition_circle_ >= circles_.size()) throw Error(ErrorCode::invalid_argument, "condition circle out of range");
  if (condition_count_ < 0) throw Error(ErrorCode::invalid_argument, "negative condition count");
  for (const auto& c : circles_) {
    if (!(c.geometry.radius > 0.0)) throw Error(ErrorCode::geometry_violation, "circle radius must be positive");
    if (c.geometry.orientation != 1 && c.geometry.orientation != -1)
      throw Error(ErrorCode::geometry_violation, "circle orientation must be +1 or -1");
  }
  for (std::size_t p = 0; p < circles_.size(); ++p)
    for (std::size_t q = p + 1; q < circles_.size(); ++q) check_disjoint(circles_[p].geometry, circles_[q].geometry);
}

bool ContourSystem::in_omega_plus(const Complex& z) const {
  for (const auto& c : circles_) {
    const double d = std::abs(z - c.geometry.center);
    if (c.geometry.orientation > 0 ? d >= c.geometry.radius : d <= c.geometry.radius) return false;
  }
  return true;
}

double ContourSystem::distance_to_contour(const Complex& z) const {
  double best = INFINITY;
  for (const auto& c : circles_)
    best = std::min(best, std::abs(std::abs(z - c.geometry.center) - c.geometry.radius));
  return best;
}

double ContourSystem::min_radius() const {
  double r = INFINITY;
  for (const auto& c : circles_) r = std::min(r, c.geometry.radius);
  return r;
}

std::size_t ContourSystem::circle_of(const Complex& zeta) const {
  std::size_t best = 0;
  double dist = INFINITY;
  for (std::size_t k = 0; k < circles_.size(); ++k) {
    const auto& g = circles_[k].geometry;
    const double d = std::abs(std::abs(zeta - g.center) - g.radius);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

Matrix2 jump_G1(const Complex& zeta, int n, int m, double a) {
  return mat2(1.0, 0.0, g1_entry(zeta, n, m, a), 1.0);
}

Matrix2 jump_G2(const Complex& zeta, int n, int m) {
  const int k = half_degree(n, m);
  if (zeta == Complex(0.0)) throw Error(ErrorCode::branch_point_evaluation, "G2 evaluated at the origin");
  return mat2(ipow(zeta, k), 0.0, 0.0, ipow(zeta, -k));
}

ContourSystem build_sigma(int n, int m, double a, double r_inner, double r_outer) {
  require_exponent_range(a);
  if (n < 0 || m < 0) throw Error(ErrorCode::invalid_argument, "negative lattice index");
  const int k = half_degree(n, m);
  if (!(r_inner > 0.0) || !(r_inner < 1.0 - kDegeneracyEps))
    throw Error(ErrorCode::geometry_violation, "inner radius must lie in (0, 1)");
  if (!(r_outer > 1.0 + r_inner)) throw Error(ErrorCode::geometry_violation, "outer circle must enclose the inner ones");

  // Reversed inner circles carry G1^{-1}: negate the 21-entry.
  JumpEvaluator inner{
      [=](const Complex& z) { return mat2(1.0, 0.0, -g1_entry(z, n, m, a), 1.0); },
      [=](const Complex& z) { return mat2(1.0, 0.0, g1_entry(z, n, m, a), 1.0); },
      [=](const Complex& z) {
        return mat2(0.0, 0.0, -g1_entry(z, n, m, a) * g1_log_derivative(z, n, m, a), 0.0);
      }};
  JumpEvaluator outer{
      [=](const Complex& z) { return mat2(ipow(z, k), 0.0, 0.0, ipow(z, -k)); },
      [=](const Complex& z) { return mat2(ipow(z, -k), 0.0, 0.0, ipow(z, k)); },
      [=](const Complex& z) {
        return mat2(static_cast<double>(k) * ipow(z, k - 1), 0.0, 0.0, -static_cast<double>(k) * ipow(z, -k - 1));
      }};

  std::vector<ContourCircle> circles{
      {{Complex(-1.0), r_inner, -1}, inner},
      {{Complex(1.0), r_inner, -1}, inner},
      {{Complex(0.0), r_outer, +1}, outer},
  };
  return ContourSystem(std::move(circles), k, 2);
}

ContourSystem model_contour(int m) {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "model problem needs m >= 0");
  JumpEvaluator jump{
      [=](const Complex& z) { return mat2(ipow(z, m), 0.0, std::exp(z), ipow(z, -m)); },
      [=](const Complex& z) { return mat2(ipow(z, -m), 0.0, -std::exp(z), ipow(z, m)); },
      [=](const Complex& z) {
        const double md = m;
        return mat2(md * ipow(z, m - 1), 0.0, std::exp(z), -md * ipow(z, -m - 1));
      }};
  return ContourSystem({{{Complex(0.0), 1.0, +1}, jump}}, m, 0);
}

Matrix2 fredholm_kernel(const ContourPoint& zeta, const ContourPoint& eta, const ContourSystem& S) {
  const auto& ci = S.circles().at(zeta.circle);
  const auto& cj = S.circles().at(eta.circle);
  const Matrix2 Ginv = ci.jump.inverse(zeta.z);
  const Complex diff = eta.z - zeta.z;
  if (std::abs(diff) < kDiagonalTol * ci.geometry.radius) return Ginv * ci.jump.derivative(zeta.z);
  return Ginv * (cj.jump.value(eta.z) - ci.jump.value(zeta.z)) / diff;
}

Matrix2 fredholm_kernel(const Complex& zeta, const Complex& eta, const ContourSystem& S) {
  return fredholm_kernel(ContourPoint{zeta, S.circle_of(zeta)}, ContourPoint{eta, S.circle_of(eta)}, S);
}

Discretization discretize(const ContourSystem& S, int nodes_per_circle) {
  if (nodes_per_circle < 8) throw Error(ErrorCode::invalid_argument, "need at least 8 nodes per circle");
  Discretization d;
  d.nodes_per_circle = nodes_per_circle;
  for (std::size_t c = 0; c < S.circles().size(); ++c) {
    const auto& g = S.circles()[c].geometry;
    for (int j = 0; j < nodes_per_circle; ++j) {
      const Complex e = std::polar(1.0, 2.0 * kPi * j / nodes_per_circle);
      d.nodes.push_back(g.center + g.radius * e);
      d.weights.push_back(static_cast<double>(g.orientation) * g.radius * e / static_cast<double>(nodes_per_circle));
      d.circle.push_back(c);
    }
  }
  return d;
}

MatrixX nystrom_matrix(const ContourSystem& S, const Discretization& d) {
  const auto M = static_cast<Eigen::Index>(d.nodes.size());
  const NodeJumps J = jumps_at_nodes(S, d);
  MatrixX A = MatrixX::Identity(2 * M, 2 * M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double radius = S.circles()[d.circle[i]].geometry.radius;
    for (Eigen::Index j = 0; j < M; ++j) {
      const Matrix2 K = d.weights[j] * kernel_from_jumps(J, d, i, j, radius);
      A(i, j) -= K(0, 0);
      A(i, M + j) -= K(0, 1);
      A(M + i, j) -= K(1, 0);
      A(M + i, M + j) -= K(1, 1);
    }
  }
  return A;
}

MatrixX condition_rows(const ContourSystem& S, const Discretization& d) {
  const auto M = static_cast<Eigen::Index>(d.nodes.size());
  const int kappa = S.condition_count();
  const auto& g = S.circles()[S.condition_circle()].geometry;
  MatrixX C = MatrixX::Zero(kappa, 2 * M);
  for (Eigen::Index j = 0; j < M; ++j) {
    if (d.circle[j] != S.condition_circle()) continue;
    const Complex inv = 1.0 / (d.nodes[j] - g.center);
    Complex p = inv;
    for (int k = 1; k <= kappa; ++k, p *= inv) C(k - 1, M + j) = d.weights[j] * p;
  }
  return C;
}

NystromSolution nystrom_solve(const ContourSystem& S, int nodes_per_circle, const NystromOptions& options) {
  const int kappa = S.condition_count();
  if (nodes_per_circle < kappa + 8)
    throw Error(ErrorCode::invalid_argument, "need at least condition_count + 8 nodes per circle");

  NystromSolution sol;
  sol.grid = discretize(S, nodes_per_circle);
  const auto M = static_cast<Eigen::Index>(sol.grid.nodes.size());

  MatrixX A(2 * M + kappa, 2 * M);
  A.topRows(2 * M) = nystrom_matrix(S, sol.grid);
  A.bottomRows(kappa) = condition_rows(S, sol.grid);

  MatrixX rhs = MatrixX::Zero(2 * M + kappa, 2);
  rhs.block(0, 0, M, 1).setOnes();
  rhs.block(M, 1, M, 1).setOnes();
  if (kappa >= 1) rhs(2 * M, 1) = 1.0;

  const LeastSquares ls(std::move(A));
  const MatrixX X = ls.solve(rhs);

  sol.phi_minus.resize(M);
  for (Eigen::Index j = 0; j < M; ++j) sol.phi_minus[j] = mat2(X(j, 0), X(j, 1), X(M + j, 0), X(M + j, 1));
  sol.max_amplitude = X.cwiseAbs().maxCoeff();
  const double defect = (ls.matrix() * X - rhs).cwiseAbs().maxCoeff();
  sol.residual = defect / std::max(1.0, sol.max_amplitude);
  sol.lsq_condition_estimate = options.estimate_condition ? ls.condition_estimate() : NAN;

  if (options.estimate_condition && !(sol.lsq_condition_estimate <= options.max_condition))
    throw Error(ErrorCode::ill_conditioned,
                "least-squares condition estimate " + sci(sol.lsq_condition_estimate) + " too large");
  if (!(sol.residual <= options.max_residual))
    throw Error(ErrorCode::residual_too_large, "Nystrom residual " + sci(sol.residual) + " too large");
  return sol;
}

Matrix2 evaluate_solution(const NystromSolution& sol, const ContourSystem& S, const Complex& z) {
  if (S.distance_to_contour(z) < kContourClearance * S.min_radius())
    throw Error(ErrorCode::too_close_to_contour, "evaluation point too close to the contour");
  const auto& d = sol.grid;
  Matrix2 acc = Matrix2::Zero();
  if (S.in_omega_plus(z)) {
    for (std::size_t j = 0; j < d.nodes.size(); ++j) {
      const Matrix2 G = S.circles()[d.circle[j]].jump.value(d.nodes[j]);
      acc += (d.weights[j] / (d.nodes[j] - z)) * (G * sol.phi_minus[j]);
    }
    return acc;
  }
  for (std::size_t j = 0; j < d.nodes.size(); ++j) acc += (d.weights[j] / (d.nodes[j] - z)) * sol.phi_minus[j];
  return Matrix2::Identity() - acc;
}

Matrix2 solution_moment(const NystromSolution& sol, const ContourSystem& S, std::size_t circle, int k,
                        bool with_jump) {
  const auto& d = sol.grid;
  const auto& c = S.circles().at(circle);
  Matrix2 acc = Matrix2::Zero();
  for (std::size_t j = 0; j < d.nodes.size(); ++j) {
    if (d.circle[j] != circle) continue;
    const Complex scale = d.weights[j] * ipow(d.nodes[j] - c.geometry.center, -k);
    acc += scale * (with_jump ? Matrix2(c.jump.value(d.nodes[j]) * sol.phi_minus[j]) : sol.phi_minus[j]);
  }
  return acc;
}

double node_residual(const NystromSolution& sol, const ContourSystem& S) {
  std::vector<std::size_t> rows(sol.grid.nodes.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return fredholm_defect(S, sol.grid, sol.phi_minus, rows);
}

double midpoint_residual(const NystromSolution& sol, const ContourSystem& S) {
  const auto& d = sol.grid;
  const int N0 = d.nodes_per_circle;
  const Discretization fine = discretize(S, 2 * N0);
  const NodeJumps J = jumps_at_nodes(S, d);
  std::vector<Matrix2> phi(fine.nodes.size());
  std::vector<std::size_t> midpoints;
  for (std::size_t p = 0; p < fine.nodes.size(); ++p) {
    if (p % 2 == 0) {
      phi[p] = sol.phi_minus[p / 2];
      continue;
    }
    midpoints.push_back(p);
    // Nystrom interpolant: Phi(z) = I + sum_j w_j K(z, zeta_j) Phi_j.
    const Complex z = fine.nodes[p];
    const auto& jump = S.circles()[fine.circle[p]].jump;
    const Matrix2 Ginv = jump.inverse(z);
    const Matrix2 G = jump.value(z);
    Matrix2 acc = Matrix2::Identity();
    for (std::size_t j = 0; j < d.nodes.size(); ++j)
      acc += (d.weights[j] / (d.nodes[j] - z)) * (Ginv * (J.G[j] - G) * sol.phi_minus[j]);
    phi[p] = acc;
  }
  return fredholm_defect(S, fine, phi, midpoints);
}

NystromOptions za_default_options() {
  NystromOptions o;
  o.max_condition = 1e15;
  return o;
}

ZaReport za_solve(int n, int m, double a, int N0, double r_inner, double r_outer, const NystromOptions& options) {
  if (n < 0 || m < 0) throw Error(ErrorCode::invalid_argument, "negative lattice index");
  half_degree(n, m);
  if (n + m < 2) throw Error(ErrorCode::invalid_argument, "Riemann-Hilbert route needs n + m >= 2");
  const ContourSystem S = build_sigma(n, m, a, r_inner, r_outer);
  const NystromSolution sol = nystrom_solve(S, N0, options);
  ZaReport r;
  r.n = n;
  r.m = m;
  r.a = a;
  r.N0 = N0;
  r.r_inner = r_inner;
  r.r_outer = r_outer;
  r.X0 = evaluate_solution(sol, S, Complex(0.0));
  if (std::abs(r.X0(0, 0)) < 1e-10) throw Error(ErrorCode::extraction_degenerate, "X_11(0) vanishes");
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  r.value = sign * r.X0(1, 0) / r.X0(0, 0);
  r.residual = sol.residual;
  r.condition_estimate = sol.lsq_condition_estimate;
  r.max_amplitude = sol.max_amplitude;
  r.digits_lost = std::log10(std::max(1.0, sol.max_amplitude / std::max(1.0, r.X0.cwiseAbs().maxCoeff())));
  return r;
}

Complex za_value(int n, int m, double a, int N0, double r_inner, double r_outer) {
  return za_solve(n, m, a, N0, r_inner, r_outer).value;
}

nlohmann::json za_report_json(const ZaReport& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"a", r.a},
          {"N0", r.N0},
          {"radii", {r.r_inner, r.r_outer}},
          {"value_re", r.value.real()},
          {"value_im", r.value.imag()},
          {"residual", r.residual},
          {"condition_estimate", r.condition_estimate},
          {"max_amplitude", r.max_amplitude},
          {"digits_lost", r.digits_lost}};
}

Complex truncated_exponential(int k, const Complex& z) {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "truncated exponential needs k >= 0");
  if (k == 0) return 0.0;
  Complex acc = 1.0;
  for (int j = k - 1; j >= 1; --j) acc = 1.0 + acc * z / static_cast<double>(j);
  return acc;
}

Matrix2 model_exact_solution(int m, const Complex& z) {
  const Complex em = truncated_exponential(m, -z);
  if (std::abs(z) > 1.0) return mat2(1.0, -ipow(z, -m) * em, 0.0, 1.0);
  // z^{-m} (1 - e^z e_m(-z)) = e^z sum_{i>=0} (-1)^{m+i} z^i / (m+i)!, summed directly.
  Complex tail = 0.0;
  Complex zi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double term = std::exp(-std::lgamma(static_cast<double>(m + i + 1)));
    const double sign = ((m + i) % 2 == 0) ? 1.0 : -1.0;
    tail += sign * term * zi;
    zi *= z;
    if (std::abs(zi) * term < 1e-300) break;
  }
  const Complex ez = std::exp(z);
  return mat2(ipow(z, m), -em, ez, ez * tail);
}

Eigen::MatrixXd kernel_change_of_basis(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "kernel basis needs m >= 1");
  std::vector<double> inv_fact(m, 1.0);
  for (int i = 1; i < m; ++i) inv_fact[i] = inv_fact[i - 1] / i;
  // B(l, j) = 1/(l-j)!: coefficient of z^l in z^j e_{m-j}(z).
  auto B = [&](int l, int j) { return l >= j ? inv_fact[l - j] : 0.0; };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      double s = (j == k) ? 1.0 : 0.0;
      for (int i = 0; i < j; ++i) s -= B(j, i) * a(k, i);
      const double pivot = B(j, j);
      if (std::abs(pivot) < 1e-300) throw Error(ErrorCode::singular_basis_change, "singular change of basis");
      a(k, j) = s / pivot;
    }
  }
  return a;
}

std::vector<VectorX> model_kernel_basis(int m, const Discretization& d) {
  const Eigen::MatrixXd coef = kernel_change_of_basis(m);
  const auto M = static_cast<Eigen::Index>(d.nodes.size());
  std::vector<VectorX> basis;
  for (int k = 0; k < m; ++k) {
    VectorX v(2 * M);
    for (Eigen::Index j = 0; j < M; ++j) {
      const Complex z = d.nodes[j];
      Complex p = 0.0;
      for (int i = m - 1; i >= 0; --i) p = p * z + coef(k, i);
      v[j] = -2.0 * ipow(z, -m) * p;
      v[M + j] = ipow(z, k);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

int winding_number(const OrientedCircle& circle, const std::function<Complex(const Complex&)>& g,
                   const std::function<Complex(const Complex&)>& dg, int samples) {
  Complex acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const Complex e = std::polar(1.0, 2.0 * kPi * j / samples);
    const Complex z = circle.center + circle.radius * e;
    acc += (circle.radius * e / static_cast<double>(samples)) * dg(z) / g(z);
  }
  const double w = circle.orientation * acc.real();
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.1 || std::abs(acc.imag()) > 0.1)
    throw Error(ErrorCode::invalid_argument, "winding number quadrature did not resolve an integer");
  return static_cast<int>(rounded);
}

int winding_number(const OrientedCircle& circle, const std::function<Complex(const Complex&)>& g, int samples) {
  double total = 0.0;
  Complex prev = g(circle.center + circle.radius);
  for (int j = 1; j <= samples; ++j) {
    const Complex z = circle.center + circle.radius * std::polar(1.0, 2.0 * kPi * j / samples);
    const Complex cur = g(z);
    total += std::arg(cur / prev);
    prev = cur;
  }
  const double w = circle.orientation * total / (2.0 * kPi);
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.1)
    throw Error(ErrorCode::invalid_argument, "phase increments did not resolve an integer winding number");
  return static_cast<int>(rounded);
}

}  // namespace zmap
