#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "packs/reaction_system.hpp"

namespace packs {

// ---------------------------------------------------------------------------
// Time marching
// ---------------------------------------------------------------------------

struct StepStats {
  std::size_t clamped = 0;  // nodal values below -1e-12 reset to zero
};

inline constexpr double kUndershootTolerance = 1e-12;

/// One IMEX Euler step: explicit reaction, backward-Euler diffusion per
/// component. Throws std::invalid_argument when dt ≤ 0.
Field step_imex(const ReactionSystem& sys, const DiffusionSolver& solver, const Field& s, double dt,
                StepStats* stats = nullptr);
Field step_imex(const ModelParams& p, const Grid& g, const Field& s, double dt);

/// Largest step allowed by the reaction Lipschitz cap, safety / Lip.
double lipschitz_step_cap(const ReactionSystem& sys, const Field& s, double safety = 0.5);

struct HistorySample {
  std::size_t step = 0;
  double time = 0.0;
  double residual = 0.0;
  double max_u = 0.0;
  double sum_w_max = 0.0;
};

enum class BoundKind { PreyAboveCarryingCapacity, AggregateAboveCap };
std::string_view to_string(BoundKind k);

struct BoundViolation {
  std::size_t step = 0;
  BoundKind kind = BoundKind::PreyAboveCarryingCapacity;
  double value = 0.0;
};

struct EvolveOptions {
  double horizon = 500.0;
  double dt = 0.05;  // upper bound; each step also obeys the Lipschitz cap
  double steady_tol = 1e-9;
  double lipschitz_safety = 0.5;
  std::size_t check_stride = 10;    // steps between convergence checks
  std::size_t history_stride = 50;  // steps between history samples
  bool stop_when_steady = true;
  std::optional<double> prey_cap;
  std::optional<double> aggregate_cap;
  /// Called after every accepted step with (step, time, state).
  std::function<void(std::size_t, double, const Field&)> observer;
};

struct EvolveReport {
  Field final;
  std::size_t steps = 0;
  double time = 0.0;
  std::vector<HistorySample> residual_history;
  std::vector<BoundViolation> bound_violations;
  bool converged = false;
  double final_residual = 0.0;
  std::size_t clamp_events = 0;
  double initial_sum_w_max = 0.0;
  double peak_sum_w = 0.0;
  double peak_u = 0.0;
};

/// Raised when a step produces NaN or Inf; carries the last finite state.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(Field last, std::size_t step)
      : std::runtime_error("non-finite state at step " + std::to_string(step)), last_(std::move(last)), step_(step) {}
  const Field& last_finite() const { return last_; }
  std::size_t step() const { return step_; }

 private:
  Field last_;
  std::size_t step_;
};

EvolveReport evolve(const ReactionSystem& sys, Field s0, const EvolveOptions& opt);

/// Evolve for the pack system with the a-priori monitors filled in when
/// unset: u ≤ lambda/mu (1 + 1e-8) and sum w ≤ 10 max(initial sum w, (lambda k - mu omega)/k^2).
EvolveReport evolve(const ModelParams& p, Field s0, EvolveOptions opt);

// ---------------------------------------------------------------------------
// Steady states
// ---------------------------------------------------------------------------

struct NewtonOptions {
  std::size_t max_iters = 50;
  double tol = 1e-9;
  std::size_t max_halvings = 30;
};

struct NewtonResult {
  bool converged = false;
  Field state;  // last iterate, also on failure
  std::size_t iterations = 0;
  double residual = 0.0;
  std::string diagnostic;
};

/// Damped Newton on the full coupled system D_c Lap v_c + R(v) = 0.
NewtonResult newton_steady(const ReactionSystem& sys, const Field& guess, const NewtonOptions& opt = {});

// ---------------------------------------------------------------------------
// Classification and diagnostics
// ---------------------------------------------------------------------------

enum class SolutionLabel { Constant, NonConstant, NoConvergence };
std::string_view to_string(SolutionLabel l);

struct Classification {
  SolutionLabel label = SolutionLabel::NoConvergence;
  double flatness = 0.0;
};

inline constexpr double kDefaultFlatnessTol = 1e-5;
inline constexpr double kFlatnessFloor = 1e-8;
inline constexpr double kDefaultSteadyTol = 1e-9;

/// max over components of (max - min) / max(|mean|, floor).
double flatness(const Field& s, double floor = kFlatnessFloor);

Classification classify_solution(const Field& s, double flatness_tol = kDefaultFlatnessTol, bool converged = true);

struct IdentityValues {
  double reaction = 0.0;   // integral of beta_eff (H - h)^2 + mu (u - u*)^2
  double dirichlet = 0.0;  // -h int D_H |grad H|^2 / H^2 - u* int D_u |grad u|^2 / u^2
};

/// Discrete versions of the two sides of the energy identity behind the
/// constancy of reduced steady states. `s` holds (H, u). Gradients live on
/// cell faces with H^2 replaced by the product of the two neighbours, which
/// makes the identity exact for discrete steady states. Throws
/// std::invalid_argument on a nonpositive nodal value.
IdentityValues mimura_identity_check(const ReducedSystem& sys, const Field& s);

struct OrderedPair {
  std::size_t larger = 0;
  std::size_t smaller = 0;
  bool operator==(const OrderedPair&) const = default;
};

/// Pairs (i, j) of predators with w_i ≥ w_j + delta everywhere while w_j is
/// not extinct (max w_j > delta) and the two differ (max |w_i - w_j| > delta).
/// Steady states with beta > 0 should produce none.
std::vector<OrderedPair> ordering_rigidity_probe(const Field& s, double delta);

}  // namespace packs
