// zmap: discrete conformal Z^a maps by Painleve, forward-evolution and
// Riemann-Hilbert methods.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zmap/cli.hpp"
#include "zmap/multiprecision.hpp"

namespace {

struct Flags {
  std::string a = "2/3";
  std::string method = "stable";
  std::vector<std::string> cells;
  int precision_bits = 0;
};

void add_common(CLI::App* cmd, zmap::RunConfig& cfg, Flags& flags) {
  cmd->add_option("--a", flags.a, "exponent in (0,2), rational p/q or decimal")->capture_default_str();
  cmd->add_option("--format", cfg.format, "csv or json")->capture_default_str();
  cmd->add_option("-o,--output", cfg.output, "data file (prefix for instability series)");
  cmd->add_option("--precision-bits", flags.precision_bits,
                  "oracle precision (default: ZMAP_PRECISION_BITS or 256)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete conformal maps Z^a"};
  app.require_subcommand(1);
  zmap::RunConfig cfg;
  Flags flags;

  auto* lattice = app.add_subcommand("lattice", "compute the lattice 0 <= n,m <= N");
  add_common(lattice, cfg, flags);
  lattice->add_option("--N", cfg.N, "max index")->capture_default_str();
  lattice->add_option("--method", flags.method, "stable, naive, oracle or backward")->capture_default_str();
  lattice->add_option("--svg", cfg.svg, "write an SVG drawing");

  auto* value = app.add_subcommand("value", "compute a single Z^a_{n,m}");
  add_common(value, cfg, flags);
  value->add_option("--n", cfg.n)->capture_default_str();
  value->add_option("--m", cfg.m)->capture_default_str();
  value->add_option("--method", flags.method, "rhp, stable, oracle, naive or backward")->capture_default_str();
  value->add_option("--N0", cfg.N0, "quadrature nodes per circle")->capture_default_str();
  value->add_option("--r-inner", cfg.r_inner)->capture_default_str();
  value->add_option("--r-outer", cfg.r_outer)->capture_default_str();

  auto* painleve = app.add_subcommand("painleve", "solve the discrete Painleve II boundary value problem");
  add_common(painleve, cfg, flags);
  painleve->add_option("--N", cfg.N, "boundary value problem size");

  auto* model = app.add_subcommand("model", "closed-form model problem");
  add_common(model, cfg, flags);
  model->add_option("--m", cfg.model_m)->capture_default_str();
  model->add_option("--nodes", cfg.nodes, "Nystrom nodes (default m + 40)");
  model->add_option("--K", cfg.K, "Laurent truncation (default m + 40)");
  model->add_option("--solver", cfg.model_solver, "nystrom, spectral or both")->capture_default_str();

  auto* instability = app.add_subcommand("instability", "error growth of the forward recursions");
  add_common(instability, cfg, flags);
  instability->add_option("--N", cfg.N)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "stable scheme against rhp and asymptotics");
  add_common(compare, cfg, flags);
  compare->add_option("--cells", flags.cells, "cells n,m (default 1,1 2,2 4,2 3,5 6,8)");
  compare->add_option("--N0", cfg.N0)->capture_default_str();
  compare->add_option("--r-inner", cfg.r_inner)->capture_default_str();
  compare->add_option("--r-outer", cfg.r_outer)->capture_default_str();
  compare->add_option("--jobs", cfg.jobs, "parallel cells")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*lattice) cfg.command = zmap::Command::lattice;
  if (*value) cfg.command = zmap::Command::value;
  if (*painleve) {
    cfg.command = zmap::Command::painleve;
    if (painleve->count("--N") == 0) cfg.N = 300;
  }
  if (*model) cfg.command = zmap::Command::model;
  if (*instability) cfg.command = zmap::Command::instability;
  if (*compare) cfg.command = zmap::Command::compare;

  try {
    cfg.a = zmap::Exponent::parse(flags.a);
    zmap::require_exponent_range(cfg.a.value());
    cfg.method = zmap::parse_method(flags.method);
    cfg.precision_bits = flags.precision_bits > 0 ? flags.precision_bits : zmap::oracle_precision_bits(256);
    for (const auto& c : flags.cells) cfg.cells.push_back(zmap::parse_cell(c));

    zmap::CommandResult result;
    if (cfg.output.empty() || cfg.command == zmap::Command::instability) {
      // Table data on stdout, report on stderr (instability writes its own files).
      std::ostringstream data;
      result = zmap::run_command(cfg, data);
      const bool has_data = !data.str().empty();
      std::cout << data.str();
      (has_data ? std::cerr : std::cout) << result.report.dump(2) << '\n';
    } else {
      std::ofstream file(cfg.output);
      if (!file) throw zmap::Error(zmap::ErrorCode::invalid_argument, "cannot open " + cfg.output);
      result = zmap::run_command(cfg, file);
      std::cout << result.report.dump(2) << '\n';
    }
    return result.ok ? 0 : 1;
  } catch (const zmap::Error& e) {
    std::cout << zmap::error_json(e).dump(2) << '\n';
    return 2;
  }
}
