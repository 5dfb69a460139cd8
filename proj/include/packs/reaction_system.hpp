#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "packs/grid.hpp"
#include "packs/model.hpp"

namespace packs {

/// Nodal values of every density on a grid, component-major. Components are
/// ordered (w_1, ..., w_N, u): predators first, prey last.
class Field {
 public:
  Field() = default;
  Field(Grid grid, std::size_t components, double fill = 0.0)
      : grid_(std::move(grid)), components_(components), data_(components * grid_.size(), fill) {}

  /// Every cell set to the same per-component value.
  static Field broadcast(const Grid& grid, std::span<const double> values);

  const Grid& grid() const { return grid_; }
  std::size_t components() const { return components_; }
  std::size_t cells() const { return grid_.size(); }

  std::span<double> component(std::size_t c) { return {data_.data() + c * cells(), cells()}; }
  std::span<const double> component(std::size_t c) const { return {data_.data() + c * cells(), cells()}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double at(std::size_t c, std::size_t cell) const { return data_[c * cells() + cell]; }
  double& at(std::size_t c, std::size_t cell) { return data_[c * cells() + cell]; }

  /// Gathers the (w_1, ..., u) vector at one cell.
  void gather(std::size_t cell, std::span<double> out) const;
  void scatter(std::size_t cell, std::span<const double> in);

  /// Sum of predator components (all but the last), cell by cell.
  std::vector<double> aggregate_predators() const;

  bool all_finite() const;

  bool operator==(const Field&) const = default;

 private:
  Grid grid_;
  std::size_t components_ = 0;
  std::vector<double> data_;
};

/// Local kinetics of a reaction-diffusion system: per-component diffusivity
/// and pointwise reaction terms with their Jacobian. The last component is
/// the prey, the others are predators.
class ReactionSystem {
 public:
  virtual ~ReactionSystem() = default;

  virtual std::size_t components() const = 0;
  virtual double diffusivity(std::size_t c) const = 0;
  virtual void rates(std::span<const double> v, std::span<double> out) const = 0;
  /// Row-major components() x components() Jacobian of rates at v.
  virtual void jacobian(std::span<const double> v, std::span<double> out) const = 0;
  /// Upper bound on the spectral norm of the Jacobian at v.
  virtual double lipschitz(std::span<const double> v) const;
};

/// The N-pack system with the coefficients of a ModelParams.
class PackSystem final : public ReactionSystem {
 public:
  explicit PackSystem(ModelParams p);

  const ModelParams& params() const { return params_; }

  std::size_t components() const override { return params_.N + 1; }
  double diffusivity(std::size_t c) const override { return c < params_.N ? params_.d : params_.D; }
  void rates(std::span<const double> v, std::span<double> out) const override;
  void jacobian(std::span<const double> v, std::span<double> out) const override;
  double lipschitz(std::span<const double> v) const override;

 private:
  ModelParams params_;
};

/// Which diffusivity multiplies the aggregate H and which the prey u.
/// Crossed gives H the prey's D and u the predators' d (the usual statement
/// of the energy identity); Matched keeps the pairing of the full model.
enum class DiffusivityPairing { Crossed, Matched };

/// Two-component system for (H, u):
///   (-omega + k u - beta_eff H) H,  (lambda - mu u - k H) u.
class ReducedSystem final : public ReactionSystem {
 public:
  ReducedSystem(ModelParams p, double beta_eff, DiffusivityPairing pairing = DiffusivityPairing::Crossed);

  double beta_eff() const { return beta_eff_; }
  const ModelParams& params() const { return params_; }
  /// The positive coexistence constants (h, u) of this system.
  ReducedState coexistence() const;

  std::size_t components() const override { return 2; }
  double diffusivity(std::size_t c) const override { return c == 0 ? diff_H_ : diff_u_; }
  void rates(std::span<const double> v, std::span<double> out) const override;
  void jacobian(std::span<const double> v, std::span<double> out) const override;

 private:
  ModelParams params_;
  double beta_eff_;
  double diff_H_;
  double diff_u_;
};

/// Max-norm of diffusion + reaction over every component and cell.
double steady_residual(const ReactionSystem& sys, const Field& s);

/// Full residual field D_c Lap v_c + R(v).
Field residual_field(const ReactionSystem& sys, const Field& s);

}  // namespace packs
