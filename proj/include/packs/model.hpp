#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace packs {

/// Coefficients of the N-pack predator / single-prey system.
///
/// Predators w_1..w_N diffuse with `d`, the prey u with `D`. Each pack dies
/// at rate `omega`, feeds on prey with coupling `k`, and fights every other
/// pack with intensity `beta`. The prey grows logistically (`lambda`, `mu`).
struct ModelParams {
  double d = 0.5;
  double D = 1.0;
  double omega = 0.5;
  double k = 1.0;
  double lambda = 1.0;
  double mu = 1.0;
  double beta = 1.0;
  std::size_t N = 2;

  bool operator==(const ModelParams&) const = default;

  ModelParams with_beta(double b) const {
    ModelParams p = *this;
    p.beta = b;
    return p;
  }
  ModelParams with_packs(std::size_t n) const {
    ModelParams p = *this;
    p.N = n;
    return p;
  }
};

inline constexpr std::size_t kMaxPacks = 1'000'000;

/// One message per violated invariant; empty means the parameters are usable.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_params(const ModelParams& p);

/// Throws std::invalid_argument listing every violation.
void require_valid(const ModelParams& p);

/// Spatially uniform solution (w, ..., w, u) with N identical packs.
struct ConstantState {
  double w = 0.0;
  double u = 0.0;
  std::size_t N = 1;

  /// Nodal vector (w, ..., w, u) of length N + 1.
  std::vector<double> expand() const;
};

/// Aggregate predator density H paired with the prey density.
struct ReducedState {
  double H = 0.0;
  double u = 0.0;
};

/// Pointwise right-hand sides with diffusion removed.
/// Result has length w.size() + 1, ordered (w_1, ..., w_N, u).
std::vector<double> reaction_terms(const ModelParams& p, std::span<const double> w, double u);

/// In-place variant on a packed (w_1, ..., w_N, u) vector; no allocation.
void reaction_terms(const ModelParams& p, std::span<const double> state, std::span<double> out);

ConstantState constant_coexistence_state(const ModelParams& p);

/// Extinction, prey-only and coexistence states of the two-equation system
///   (-omega + k u - beta_eff H) H = 0,  (lambda - mu u - k H) u = 0.
std::array<ReducedState, 3> mimura_states(const ModelParams& p, double beta_eff);

struct PopulationComparison {
  double packs_total = 0.0;   // W_N
  double single_total = 0.0;  // W_1
  double ratio = 1.0;         // W_N / W_1
};

/// Total predator mass of the N-pack constant state versus a single pack.
PopulationComparison total_population(const ModelParams& p, double domain_volume);

}  // namespace packs
