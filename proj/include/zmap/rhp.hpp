#pragma once

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmap/linalg.hpp"
#include "zmap/scalar.hpp"

namespace zmap {

struct OrientedCircle {
  Complex center;
  double radius = 1.0;
  int orientation = +1;  // +1 counterclockwise, -1 clockwise
};

/// Jump data attached to one circle: G, its inverse and its derivative.
struct JumpEvaluator {
  std::function<Matrix2(const Complex&)> value;
  std::function<Matrix2(const Complex&)> inverse;
  std::function<Matrix2(const Complex&)> derivative;
};

struct ContourCircle {
  OrientedCircle geometry;
  JumpEvaluator jump;
};

/// Disjoint oriented circles bounding a domain Omega_+ on their left, with
/// the number of moment conditions that pin down the unique solution and the
/// circle those conditions are integrated over.
class ContourSystem {
 public:
  ContourSystem(std::vector<ContourCircle> circles, int condition_count, std::size_t condition_circle);

  const std::vector<ContourCircle>& circles() const noexcept { return circles_; }
  int condition_count() const noexcept { return condition_count_; }
  std::size_t condition_circle() const noexcept { return condition_circle_; }

  /// Inside every counterclockwise circle and outside every clockwise one.
  bool in_omega_plus(const Complex& z) const;
  double distance_to_contour(const Complex& z) const;
  double min_radius() const;
  /// Index of the circle closest to a point on the contour.
  std::size_t circle_of(const Complex& zeta) const;

 private:
  std::vector<ContourCircle> circles_;
  int condition_count_;
  std::size_t condition_circle_;
};

/// Lower unit-triangular jump with 21-entry
/// e^{i a pi/4} e^{-(a/2) Log(zeta/i)} (zeta-1)^{-m} (zeta+1)^{-n};
/// the branch cut of zeta^{-a/2} lies on the negative imaginary axis.
Matrix2 jump_G1(const Complex& zeta, int n, int m, double a);

/// diag(zeta^{(n+m)/2}, zeta^{-(n+m)/2}); n + m must be even.
Matrix2 jump_G2(const Complex& zeta, int n, int m);

/// Three-circle contour for Z^a_{n,m}: clockwise circles about +-1 carrying
/// G1^{-1}, a counterclockwise outer circle about 0 carrying G2.
ContourSystem build_sigma(int n, int m, double a, double r_inner = 0.5, double r_outer = 3.0);

/// Unit circle with jump [[zeta^m, 0], [e^zeta, zeta^{-m}]].
ContourSystem model_contour(int m);

struct ContourPoint {
  Complex z;
  std::size_t circle;
};

/// G^{-1}(zeta) (G(eta) - G(zeta)) / (eta - zeta), with the removable
/// singularity on the diagonal replaced by G^{-1} G'.
Matrix2 fredholm_kernel(const ContourPoint& zeta, const ContourPoint& eta, const ContourSystem& S);
Matrix2 fredholm_kernel(const Complex& zeta, const Complex& eta, const ContourSystem& S);

/// Trapezoidal nodes and orientation-signed weights, including the 1/(2 pi i)
/// factor: sum_j w_j f(zeta_j) approximates (2 pi i)^{-1} int f.
struct Discretization {
  std::vector<Complex> nodes;
  std::vector<Complex> weights;
  std::vector<std::size_t> circle;
  int nodes_per_circle = 0;
};

Discretization discretize(const ContourSystem& S, int nodes_per_circle);

/// Square Nystrom matrix of the Fredholm equation acting on one column of
/// Phi_-, unknowns ordered (component 1 at all nodes, component 2 at all nodes).
MatrixX nystrom_matrix(const ContourSystem& S, const Discretization& d);

/// Moment-condition rows on the second component, k = 1..condition_count.
MatrixX condition_rows(const ContourSystem& S, const Discretization& d);

struct NystromOptions {
  bool estimate_condition = true;
  double max_condition = 1e8;
  double max_residual = 1e-8;
};

struct NystromSolution {
  Discretization grid;
  std::vector<Matrix2> phi_minus;
  double lsq_condition_estimate = 0.0;
  double residual = 0.0;       // ||A x - b||_inf / max(1, ||x||_inf)
  double max_amplitude = 0.0;  // max entry of Phi_- over the nodes
};

/// Modified Nystrom method: trapezoidal discretisation of the Fredholm
/// equation plus the moment conditions, solved in the least-squares sense.
NystromSolution nystrom_solve(const ContourSystem& S, int nodes_per_circle, const NystromOptions& options = {});

/// Reconstructs Phi(z) off the contour from the boundary values.
Matrix2 evaluate_solution(const NystromSolution& sol, const ContourSystem& S, const Complex& z);

/// (2 pi i)^{-1} int_{circle} F(zeta) (zeta - center)^{-k} dzeta by the same quadrature,
/// with F = G Phi_- if with_jump, else Phi_-.
Matrix2 solution_moment(const NystromSolution& sol, const ContourSystem& S, std::size_t circle, int k,
                        bool with_jump);

/// Residual of the Fredholm equation at the midpoints between nodes, using the
/// Nystrom interpolant of Phi_- and the doubled trapezoidal rule.
double midpoint_residual(const NystromSolution& sol, const ContourSystem& S);
/// The same quantity evaluated at the nodes themselves.
double node_residual(const NystromSolution& sol, const ContourSystem& S);

struct ZaReport {
  int n = 0, m = 0;
  double a = 0.0;
  int N0 = 0;
  double r_inner = 0.5, r_outer = 3.0;
  Complex value;
  Matrix2 X0;
  double residual = 0.0;
  double condition_estimate = 0.0;
  double max_amplitude = 0.0;
  double digits_lost = 0.0;  // log10 of node amplitude over |X(0)|
};

/// The outer jump diag(zeta^{+-kappa}) makes these systems far worse scaled
/// than the model problem, so the condition ceiling is set accordingly.
NystromOptions za_default_options();

ZaReport za_solve(int n, int m, double a, int N0, double r_inner = 0.5, double r_outer = 3.0,
                  const NystromOptions& options = za_default_options());

/// (-1)^{m+1} X_21(0) / X_11(0) from the three-circle problem.
Complex za_value(int n, int m, double a, int N0, double r_inner = 0.5, double r_outer = 3.0);

nlohmann::json za_report_json(const ZaReport& r);

/// e_k(z) = sum_{j<k} z^j / j!
Complex truncated_exponential(int k, const Complex& z);

/// Exact solution of the model problem for m >= 0.
Matrix2 model_exact_solution(int m, const Complex& z);

/// Coefficients a(k, j) of z^k = sum_j a(k,j) z^j e_{m-j}(z), by forward substitution.
Eigen::MatrixXd kernel_change_of_basis(int m);

/// The m kernel vectors (-2 zeta^{-m} p_k(zeta), zeta^k), sampled at the nodes
/// in the component-major layout of nystrom_matrix.
std::vector<VectorX> model_kernel_basis(int m, const Discretization& d);

/// Winding number of g about the circle from trapezoidal quadrature of g'/g.
int winding_number(const OrientedCircle& circle, const std::function<Complex(const Complex&)>& g,
                   const std::function<Complex(const Complex&)>& dg, int samples = 512);

/// Winding number from accumulated phase increments of g (no derivative needed).
int winding_number(const OrientedCircle& circle, const std::function<Complex(const Complex&)>& g,
                   int samples = 2048);

}  // namespace zmap
