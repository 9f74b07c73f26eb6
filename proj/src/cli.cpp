#include "zmap/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "zmap/evolution.hpp"
#include "zmap/painleve.hpp"
#include "zmap/rhp.hpp"
#include "zmap/spectral.hpp"

namespace zmap {

namespace {

constexpr double kLatticeTol = 1e-9;
constexpr double kStableValueTol = 1e-9;
constexpr double kRhpValueTol = 1e-6;
constexpr double kOracleValueTol = 1e-12;
constexpr double kModelTol = 1e-12;
constexpr double kPainleveTol = 1e-12;

nlohmann::json complex_json(const Complex& z) { return {z.real(), z.imag()}; }

std::string complex_text(const Complex& z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.16g%+.16gi", z.real(), z.imag());
  return buf;
}

double two_norm(const Matrix2& M) { return Eigen::JacobiSVD<Matrix2>(M).singularValues()(0); }

void require_cell(int n, int m) {
  if (n < 0 || m < 0) throw Error(ErrorCode::invalid_argument, "lattice indices must be non-negative");
  if ((n + m) % 2 != 0)
    throw Error(ErrorCode::parity_violation,
                "n + m must be even (got n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
}

Lattice build_lattice(const RunConfig& cfg, int N) {
  switch (cfg.method) {
    case Method::stable:
      return evolve_stable(cfg.a, N);
    case Method::naive:
      return evolve_forward_naive(cfg.a, N);
    case Method::oracle:
      return evolve_oracle(cfg.a, N, cfg.precision_bits).lattice;
    case Method::backward:
      return evolve_backward_crossratio(cfg.a, N);
    case Method::rhp:
      break;
  }
  throw Error(ErrorCode::invalid_argument, "the rhp method computes single values, not lattices");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
  return f;
}

}  // namespace

Cell parse_cell(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::invalid_argument, "cell must look like n,m: " + text);
  try {
    std::size_t used = 0;
    Cell c{std::stoi(text.substr(0, comma), &used), 0};
    if (used != comma) throw std::invalid_argument(text);
    const std::string rest = text.substr(comma + 1);
    c.m = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    if (c.n < 0 || c.m < 0) throw std::invalid_argument(text);
    return c;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_argument, "cell must look like n,m: " + text);
  }
}

nlohmann::json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

CommandResult cmd_lattice(const RunConfig& cfg, std::ostream& data) {
  if (cfg.N < 1) throw Error(ErrorCode::invalid_argument, "lattice needs N >= 1");
  const Lattice L = build_lattice(cfg, cfg.N);
  const auto res = lattice_residuals(L);
  const double sym = symmetry_defect(L);

  if (cfg.format == "json")
    data << lattice_to_json(L).dump() << '\n';
  else
    write_lattice_csv(data, L);
  if (!cfg.svg.empty()) {
    auto f = open_output(cfg.svg);
    write_lattice_svg(f, L);
  }

  CommandResult out;
  const bool gated = cfg.method == Method::stable || cfg.method == Method::oracle;
  out.ok = !gated || (res.cross_ratio <= kLatticeTol && res.constraint <= kLatticeTol && sym <= kLatticeTol);
  out.report = {{"command", "lattice"},
                {"a", cfg.a.to_string()},
                {"N", cfg.N},
                {"method", std::string(to_string(L.method()))},
                {"points", (cfg.N + 1) * (cfg.N + 1)},
                {"cross_ratio_residual", res.cross_ratio},
                {"constraint_residual", res.constraint},
                {"symmetry_defect", sym},
                {"tolerance", gated ? nlohmann::json(kLatticeTol) : nlohmann::json(nullptr)},
                {"ok", out.ok}};
  if (!cfg.svg.empty()) {
    const auto parity = circle_center_parity(L);
    out.report["svg"] = cfg.svg;
    out.report["circle_overlay"] = parity.has_value();
  }
  return out;
}

CommandResult cmd_value(const RunConfig& cfg) {
  require_cell(cfg.n, cfg.m);
  const double a = cfg.a.value();
  const int N = std::max({cfg.n, cfg.m, 1}) + 1;
  CommandResult out;
  Complex value;
  double estimate = 0.0;
  double tol = 0.0;
  nlohmann::json diag = nlohmann::json::object();

  switch (cfg.method) {
    case Method::rhp: {
      const ZaReport r = za_solve(cfg.n, cfg.m, a, cfg.N0, cfg.r_inner, cfg.r_outer);
      const Complex finer = za_value(cfg.n, cfg.m, a, cfg.N0 + 8, cfg.r_inner, cfg.r_outer);
      value = r.value;
      estimate = std::abs(finer - value);
      tol = kRhpValueTol;
      diag = za_report_json(r);
      break;
    }
    case Method::stable: {
      const Lattice L = evolve_stable(cfg.a, N);
      const auto sol = solve_bvp(a, 2 * select_bvp_size(N, a));
      value = L(cfg.n, cfg.m);
      estimate = std::abs(evolve_stable(cfg.a, N, sol)(cfg.n, cfg.m) - value);
      tol = kStableValueTol;
      diag = {{"bvp_size", sol.N}, {"newton_iters", sol.newton_iters}};
      break;
    }
    case Method::oracle: {
      const auto run = evolve_oracle(cfg.a, N, cfg.precision_bits);
      const auto check = evolve_oracle(cfg.a, N, cfg.precision_bits + 64);
      value = run.lattice(cfg.n, cfg.m);
      estimate = std::abs(check.lattice(cfg.n, cfg.m) - value);
      tol = kOracleValueTol;
      diag = {{"precision_bits", cfg.precision_bits},
              {"cross_ratio_residual", run.cross_ratio_residual},
              {"constraint_residual", run.constraint_residual}};
      break;
    }
    case Method::naive:
    case Method::backward: {
      value = build_lattice(cfg, N)(cfg.n, cfg.m);
      estimate = std::abs(evolve_stable(cfg.a, N)(cfg.n, cfg.m) - value);
      tol = INFINITY;  // reported against the stable scheme, no tolerance
      break;
    }
  }
  out.ok = estimate <= tol;
  out.report = {{"command", "value"},
                {"n", cfg.n},
                {"m", cfg.m},
                {"a", cfg.a.to_string()},
                {"method", std::string(to_string(cfg.method))},
                {"value", complex_text(value)},
                {"value_re", value.real()},
                {"value_im", value.imag()},
                {"estimated_error", estimate},
                {"tolerance", std::isfinite(tol) ? nlohmann::json(tol) : nlohmann::json(nullptr)},
                {"diagnostics", diag},
                {"ok", out.ok}};
  return out;
}

CommandResult cmd_painleve(const RunConfig& cfg, std::ostream& data) {
  const PainleveSolution sol = solve_bvp(cfg.a.value(), cfg.N);
  if (cfg.format == "json")
    data << painleve_diagnostics_json(sol).dump() << '\n';
  else
    write_painleve_csv(data, sol);
  CommandResult out;
  const double defect = sol.max_modulus_defect();
  const double x0_error = std::abs(sol.x[0] - std::polar(1.0, cfg.a.value() * kPi / 4.0));
  out.ok = sol.final_residual <= kPainleveTol && defect <= kPainleveTol;
  out.report = painleve_diagnostics_json(sol);
  out.report["command"] = "painleve";
  out.report["max_modulus_defect"] = defect;
  out.report["x0_error"] = x0_error;
  out.report["ok"] = out.ok;
  return out;
}

CommandResult cmd_model(const RunConfig& cfg) {
  const int m = cfg.model_m;
  if (m < 0) throw Error(ErrorCode::invalid_argument, "model problem needs m >= 0");
  if (cfg.model_solver != "nystrom" && cfg.model_solver != "spectral" && cfg.model_solver != "both")
    throw Error(ErrorCode::invalid_argument, "solver must be nystrom, spectral or both");
  const Matrix2 exact = model_exact_solution(m, Complex(0.0));
  CommandResult out;
  out.report = {{"command", "model"}, {"m", m}};

  if (cfg.model_solver != "spectral") {
    const int nodes = cfg.nodes > 0 ? cfg.nodes : m + 40;
    const ContourSystem S = model_contour(m);
    const NystromSolution sol = nystrom_solve(S, nodes);
    const Matrix2 Y0 = evaluate_solution(sol, S, Complex(0.0));
    const double y0_error = two_norm(Y0 - exact);
    const double moment_error = two_norm(solution_moment(sol, S, 0, 1, false) - Matrix2::Identity());
    const bool ok = y0_error <= kModelTol && moment_error <= kModelTol;
    out.ok = out.ok && ok;
    out.report["nystrom"] = {{"nodes", nodes},
                             {"y0_error", y0_error},
                             {"identity_moment_error", moment_error},
                             {"condition_estimate", sol.lsq_condition_estimate},
                             {"residual", sol.residual},
                             {"ok", ok}};
  }
  if (cfg.model_solver != "nystrom") {
    const int K = cfg.K > 0 ? cfg.K : m + 40;
    const SpectralSolution s = spectral_solve_model(m, K);
    const bool ok = s.y0_error <= kModelTol;
    out.ok = out.ok && ok;
    out.report["spectral"] = spectral_report_json(s);
    out.report["spectral"]["ok"] = ok;
  }
  out.report["ok"] = out.ok;
  return out;
}

CommandResult cmd_instability(const RunConfig& cfg, std::ostream& data) {
  const int N = cfg.N;
  if (N < 2) throw Error(ErrorCode::invalid_argument, "instability needs N >= 2");
  const double a = cfg.a.value();
  const PainleveSolution sol = solve_bvp(a, select_bvp_size(N, a));
  const Lattice reference = evolve_stable(cfg.a, N, sol);
  const EvolutionReport naive = make_evolution_report(evolve_forward_naive(cfg.a, N), reference);
  const ForwardPainleve fwd = dpii_forward_unstable(a, N);
  std::vector<double> dpii(N + 1);
  for (int n = 0; n <= N; ++n) dpii[n] = std::abs(fwd.x[n] - sol.x[n]);

  if (!cfg.output.empty()) {
    auto f1 = open_output(cfg.output + "_naive_diagonal.csv");
    write_error_series(f1, 2, naive.diagonal_error);
    auto f2 = open_output(cfg.output + "_dpii_forward.csv");
    write_error_series(f2, 0, dpii);
    auto f3 = open_output(cfg.output + "_modulus.csv");
    write_error_series(f3, 0, fwd.modulus_error);
  } else {
    data << "n,naive_diagonal,dpii_forward,modulus\n";
    char buf[160];
    for (int n = 0; n <= N; ++n) {
      const double nd = n >= 2 ? naive.diagonal_error[n - 2] : 0.0;
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", n, nd, dpii[n], fwd.modulus_error[n]);
      data << buf;
    }
  }

  auto first_above = [](const std::vector<double>& e, int first_n, double level) -> nlohmann::json {
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] >= level) return first_n + static_cast<int>(k);
    return nullptr;
  };
  // Modulus indicator against the true error over 5 <= n <= 20, in decades.
  double spread = 0.0;
  for (int n = 5; n <= std::min(20, N); ++n) {
    const double t = std::max(dpii[n], 1e-300), mod = std::max(fwd.modulus_error[n], 1e-300);
    if (t > 1e-14 && mod > 1e-14) spread = std::max(spread, std::abs(std::log10(mod / t)));
  }
  CommandResult out;
  out.report = {{"command", "instability"},
                {"a", cfg.a.to_string()},
                {"N", N},
                {"naive_first_n_above_1e-3", first_above(naive.diagonal_error, 2, 1e-3)},
                {"naive_first_n_above_0.1", first_above(naive.diagonal_error, 2, 0.1)},
                {"dpii_first_n_above_1e-3", first_above(dpii, 0, 1e-3)},
                {"modulus_first_n_above_1e-3", first_above(fwd.modulus_error, 0, 1e-3)},
                {"naive_max_error", *std::max_element(naive.diagonal_error.begin(), naive.diagonal_error.end())},
                {"modulus_vs_true_decades", spread},
                {"ok", true}};
  return out;
}

CommandResult cmd_compare(const RunConfig& cfg, std::ostream& data) {
  std::vector<Cell> cells = cfg.cells;
  if (cells.empty()) cells = {{1, 1}, {2, 2}, {4, 2}, {3, 5}, {6, 8}};
  int N = 1;
  for (const auto& c : cells) {
    require_cell(c.n, c.m);
    if (c.n + c.m < 2) throw Error(ErrorCode::invalid_argument, "compare needs n + m >= 2");
    N = std::max({N, c.n + 1, c.m + 1});
  }
  const double a = cfg.a.value();
  const Lattice L = evolve_stable(cfg.a, N);

  struct Row {
    Complex stable, rhp, asym;
    std::string error;
  };
  std::vector<Row> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < cells.size();) {
      Row& r = rows[k];
      r.stable = L(cells[k].n, cells[k].m);
      r.asym = asymptotic_value(cells[k].n, cells[k].m, a);
      try {
        r.rhp = za_value(cells[k].n, cells[k].m, a, cfg.N0, cfg.r_inner, cfg.r_outer);
      } catch (const Error& e) {
        r.rhp = Complex(NAN, NAN);
        r.error = to_string(e.code());
      }
    }
  };
  const int jobs = std::clamp(cfg.jobs, 1, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CommandResult out;
  nlohmann::json table = nlohmann::json::array();
  data << "n,m,stable_re,stable_im,rhp_re,rhp_im,abs_diff_rhp,rel_diff_asymptotic\n";
  char buf[256];
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Row& r = rows[k];
    const double d_rhp = std::abs(r.stable - r.rhp);
    const double d_asym = std::abs(r.stable - r.asym) / std::abs(r.stable);
    const bool ok = r.error.empty() && d_rhp <= kRhpValueTol;
    out.ok = out.ok && ok;
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.6e,%.6e\n", cells[k].n, cells[k].m,
                  r.stable.real(), r.stable.imag(), r.rhp.real(), r.rhp.imag(), d_rhp, d_asym);
    data << buf;
    nlohmann::json row = {{"n", cells[k].n},       {"m", cells[k].m},          {"stable", complex_json(r.stable)},
                          {"rhp", complex_json(r.rhp)}, {"abs_diff_rhp", d_rhp}, {"rel_diff_asymptotic", d_asym},
                          {"ok", ok}};
    if (!r.error.empty()) row["error"] = r.error;
    table.push_back(row);
  }
  out.report = {{"command", "compare"}, {"a", cfg.a.to_string()}, {"N0", cfg.N0},
                {"tolerance", kRhpValueTol}, {"rows", table},          {"ok", out.ok}};
  return out;
}

CommandResult run_command(const RunConfig& cfg, std::ostream& data) {
  if (cfg.format != "csv" && cfg.format != "json") throw Error(ErrorCode::invalid_argument, "format must be csv or json");
  switch (cfg.command) {
    case Command::lattice:
      return cmd_lattice(cfg, data);
    case Command::value:
      return cmd_value(cfg);
    case Command::painleve:
      return cmd_painleve(cfg, data);
    case Command::model:
      return cmd_model(cfg);
    case Command::instability:
      return cmd_instability(cfg, data);
    case Command::compare:
      return cmd_compare(cfg, data);
  }
  throw Error(ErrorCode::invalid_argument, "unknown command");
}

std::optional<int> circle_center_parity(const Lattice& L, double tol) {
  const int N = L.max_index();
  for (int parity : {1, 0}) {
    bool found = false, equal = true;
    for (int n = 1; n < N && equal; ++n)
      for (int m = 1; m < N && equal; ++m) {
        if ((n + m) % 2 != parity) continue;
        const Complex c = L(n, m);
        const double d[4] = {std::abs(L(n + 1, m) - c), std::abs(L(n - 1, m) - c), std::abs(L(n, m + 1) - c),
                             std::abs(L(n, m - 1) - c)};
        for (double di : d)
          if (std::abs(di - d[0]) > tol * d[0]) equal = false;
        found = true;
      }
    if (found && equal) return parity;
  }
  return std::nullopt;
}

void write_lattice_svg(std::ostream& os, const Lattice& L, double tol) {
  const int N = L.max_index();
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) {
      const Complex z = L(n, m);
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
  const double size = 1000.0, margin = 20.0;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double scale = (size - 2 * margin) / span;
  auto px = [&](const Complex& z) { return margin + (z.real() - xmin) * scale; };
  auto py = [&](const Complex& z) { return size - margin - (z.imag() - ymin) * scale; };

  char buf[128];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  os << "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.8\">\n";
  for (int dir = 0; dir < 2; ++dir)
    for (int i = 0; i <= N; ++i) {
      os << "<polyline points=\"";
      for (int j = 0; j <= N; ++j) {
        const Complex z = dir == 0 ? L(j, i) : L(i, j);
        std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(z), py(z));
        os << buf;
      }
      os << "\"/>\n";
    }
  os << "</g>\n";
  if (const auto parity = circle_center_parity(L, tol)) {
    os << "<g fill=\"none\" stroke=\"#d95319\" stroke-width=\"0.6\">\n";
    for (int n = 1; n < N; ++n)
      for (int m = 1; m < N; ++m) {
        if ((n + m) % 2 != *parity) continue;
        const Complex c = L(n, m);
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", px(c), py(c),
                      std::abs(L(n + 1, m) - c) * scale);
        os << buf;
      }
    os << "</g>\n";
  }
  os << "</svg>\n";
}

}  // namespace zmap
