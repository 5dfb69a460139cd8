#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packs/grid.hpp"
#include "packs/model.hpp"
#include "packs/sweep.hpp"

namespace packs {

struct SolverConfig {
  double dt = 0.05;
  double T = 500.0;
  double steady_tol = kDefaultSteadyTol;
  double flatness_tol = kDefaultFlatnessTol;
  std::uint64_t seed = 20240601;
  std::size_t newton_max_iters = 50;
  bool operator==(const SolverConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> beta_grid{0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0};
  std::vector<std::size_t> N_grid{1, 2, 3, 4, 5, 6, 7, 8, 16, 32, 64};
  std::size_t runs = 3;
  double amplitude = 1e-3;
  unsigned threads = 0;
  bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  bool operator==(const OutputConfig&) const = default;
};

/// Everything one experiment needs. Sections [model] and [domain] are
/// mandatory in files; [solver], [sweep] and [output] fall back to defaults.
struct RunConfig {
  ModelParams model;
  Grid domain = build_grid_1d(1.0, 100);
  SolverConfig solver;
  SweepConfig sweep;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;
};

struct ConfigError {
  std::size_t line = 0;  // 1-based; 0 when no single line is to blame
  std::string message;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value(); }
};

/// INI-style `key = value` lines under `[section]` headers; `#` and `;`
/// start comments. Lists are comma separated. Every problem is collected.
ParseOutcome parse_config(std::string_view text);

/// Canonical text form; parse_config(render_config(c)) reproduces c exactly.
std::string render_config(const RunConfig& c);

Protocol protocol_from(const RunConfig& c);

std::string format_errors(const std::vector<ConfigError>& errors);

}  // namespace packs
