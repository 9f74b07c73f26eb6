#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmap/core.hpp"
#include "zmap/error.hpp"

namespace zmap {

enum class Command { lattice, value, painleve, model, instability, compare };

struct Cell {
  int n = 0, m = 0;
};

/// "6,8" -> {6, 8}
Cell parse_cell(const std::string& text);

struct RunConfig {
  Command command = Command::lattice;
  Exponent a = Exponent::rational(2, 3);
  int N = 49;  // lattice size, or BVP size for painleve
  int n = 6, m = 8;
  Method method = Method::stable;
  int N0 = 42;
  double r_inner = 0.5, r_outer = 3.0;
  int precision_bits = 256;
  std::string format = "csv";  // csv | json
  std::string output;          // data file (prefix for instability); empty: stdout
  std::string svg;             // lattice drawing, optional

  // model
  int model_m = 100;
  int nodes = 0;                      // 0: model_m + 40
  int K = 0;                          // 0: model_m + 40
  std::string model_solver = "both";  // nystrom | spectral | both

  std::vector<Cell> cells;
  int jobs = 1;
};

/// Report JSON plus whether every declared tolerance was met.
struct CommandResult {
  nlohmann::json report;
  bool ok = true;
};

/// Runs one command; data (CSV/JSON tables) goes to `data`.
CommandResult run_command(const RunConfig& cfg, std::ostream& data);

CommandResult cmd_lattice(const RunConfig& cfg, std::ostream& data);
CommandResult cmd_value(const RunConfig& cfg);
CommandResult cmd_painleve(const RunConfig& cfg, std::ostream& data);
CommandResult cmd_model(const RunConfig& cfg);
CommandResult cmd_instability(const RunConfig& cfg, std::ostream& data);
CommandResult cmd_compare(const RunConfig& cfg, std::ostream& data);

nlohmann::json error_json(const Error& e);

/// Parity (0 or 1) of lattice points whose four neighbours are equidistant to
/// relative tolerance tol at every interior point; odd parity is tried first.
std::optional<int> circle_center_parity(const Lattice& L, double tol = 1e-6);

/// Quad mesh as polylines in a 1000 x 1000 viewport, with the circle pattern
/// overlaid when circle_center_parity succeeds.
void write_lattice_svg(std::ostream& os, const Lattice& L, double tol = 1e-6);

}  // namespace zmap
