#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

#include "packs/dynamics.hpp"

namespace packs {

/// Seed splitting shared by every randomised experiment:
///   h = splitmix64(master ^ fnv1a64(section)); h = splitmix64(h ^ i) per index.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t derive_seed(std::uint64_t master, std::string_view section, std::initializer_list<std::uint64_t> indices);

enum class PerturbationKind { EigenDirection, Noise };

/// Constant coexistence state times (1 + amplitude * shape), shape in [-1, 1].
/// EigenDirection moves w_1 up and w_2 down (the unstable pack-difference
/// direction) modulated by (1 + cos(pi x / L_x)) / 2; for N = 1 it moves w
/// up and u down with the same profile. Noise draws the shape uniformly per
/// cell and component from `seed`.
Field perturbed_constant(const ModelParams& p, const Grid& g, PerturbationKind kind, double amplitude,
                         std::uint64_t seed);

struct Protocol {
  std::size_t runs = 3;  // run 0 eigen-direction, the rest seeded noise
  double amplitude = 1e-3;
  double horizon = 500.0;
  double dt = 0.05;
  double steady_tol = kDefaultSteadyTol;
  double flatness_tol = kDefaultFlatnessTol;
  std::size_t newton_max_iters = 50;
  /// Finish runs that have not settled by the horizon with Newton from the
  /// final state. Unstable constants drift too slowly to settle by time
  /// marching alone when beta or w is small.
  bool newton_polish = true;
  /// Keep final states in SweepCell::outcomes; off by default to bound memory.
  bool keep_states = false;
};

struct RunOutcome {
  Classification classification;
  Field state;
  bool evolve_converged = false;
  bool polished = false;
  std::size_t steps = 0;
  std::size_t bound_violations = 0;
  std::size_t prey_bound_violations = 0;
  double initial_sum_w_max = 0.0;
  double peak_sum_w = 0.0;
  double peak_u = 0.0;
  std::string diagnostic;
};

/// Evolve from one perturbed start, optionally polish with Newton, classify.
RunOutcome run_protocol_once(const ModelParams& p, const Grid& g, PerturbationKind kind, const Protocol& protocol,
                             std::uint64_t seed);

struct SweepCell {
  double beta = 0.0;
  std::size_t N = 1;
  Classification classification;
  std::size_t runs = 0;
  std::vector<std::uint64_t> seeds;
  double runtime_s = 0.0;
  std::vector<RunOutcome> outcomes;
};

struct SweepResult {
  std::vector<double> beta_grid;
  std::vector<std::size_t> N_grid;
  std::vector<SweepCell> cells;  // beta-major: cells[b * N_grid.size() + n]
  /// Per N: the smallest beta classified NonConstant, if any.
  std::vector<std::optional<double>> frontier;

  const SweepCell& at(std::size_t b, std::size_t n) const { return cells[b * N_grid.size() + n]; }
};

/// Evaluates every (beta, N) cell on `threads` workers (0 = hardware
/// concurrency). Cell seeds depend only on (seed, beta index, N index), so the
/// result does not depend on scheduling. Solver failures become NoConvergence.
SweepResult run_sweep(const ModelParams& base, const std::vector<double>& beta_grid,
                      const std::vector<std::size_t>& N_grid, const Grid& grid, const Protocol& protocol,
                      std::uint64_t seed, unsigned threads = 0);

/// BelowRange: even the smallest beta shows structure. AboveRange: even the
/// largest N does.
enum class ThresholdStatus { Estimated, UnboundedInRange, BelowRange, AboveRange };
std::string_view to_string(ThresholdStatus s);

struct Thresholds {
  ThresholdStatus beta_status = ThresholdStatus::UnboundedInRange;
  double beta_bar = 0.0;  // largest beta such that every column up to it is constant
  ThresholdStatus N_status = ThresholdStatus::UnboundedInRange;
  std::size_t N_bar = 0;  // smallest N such that every row from it on is constant
};

/// Empirical surrogates for the constancy thresholds. NoConvergence cells are
/// ignored. With no NonConstant cell both report UnboundedInRange.
Thresholds estimate_thresholds(const SweepResult& r);

}  // namespace packs
