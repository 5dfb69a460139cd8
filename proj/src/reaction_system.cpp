#include "packs/reaction_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace packs {

Field Field::broadcast(const Grid& grid, std::span<const double> values) {
  Field f(grid, values.size());
  for (std::size_t c = 0; c < values.size(); ++c) std::ranges::fill(f.component(c), values[c]);
  return f;
}

void Field::gather(std::size_t cell, std::span<double> out) const {
  for (std::size_t c = 0; c < components_; ++c) out[c] = data_[c * cells() + cell];
}

void Field::scatter(std::size_t cell, std::span<const double> in) {
  for (std::size_t c = 0; c < components_; ++c) data_[c * cells() + cell] = in[c];
}

std::vector<double> Field::aggregate_predators() const {
  std::vector<double> H(cells(), 0.0);
  for (std::size_t c = 0; c + 1 < components_; ++c) {
    const auto comp = component(c);
    for (std::size_t j = 0; j < H.size(); ++j) H[j] += comp[j];
  }
  return H;
}

bool Field::all_finite() const {
  return std::ranges::all_of(data_, [](double x) { return std::isfinite(x); });
}

double ReactionSystem::lipschitz(std::span<const double> v) const {
  const std::size_t n = components();
  std::vector<double> jac(n * n);
  jacobian(v, jac);
  double rows = 0.0;
  double cols = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double sr = 0.0;
    double sc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      sr += std::abs(jac[r * n + c]);
      sc += std::abs(jac[c * n + r]);
    }
    rows = std::max(rows, sr);
    cols = std::max(cols, sc);
  }
  // ||J||_2 <= sqrt(||J||_1 ||J||_inf)
  return std::sqrt(rows * cols);
}

PackSystem::PackSystem(ModelParams p) : params_(p) { require_valid(params_); }

void PackSystem::rates(std::span<const double> v, std::span<double> out) const { reaction_terms(params_, v, out); }

void PackSystem::jacobian(std::span<const double> v, std::span<double> out) const {
  const auto& p = params_;
  const std::size_t n = p.N;
  const std::size_t stride = n + 1;
  const double u = v[n];
  double H = 0.0;
  for (std::size_t i = 0; i < n; ++i) H += v[i];
  const double base = -p.omega + p.k * u;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * stride;
    const double cross = -p.beta * v[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = cross;
    row[i] = base - p.beta * (H - v[i]);
    row[n] = p.k * v[i];
  }
  double* last = out.data() + n * stride;
  for (std::size_t j = 0; j < n; ++j) last[j] = -p.k * u;
  last[n] = p.lambda - 2.0 * p.mu * u - p.k * H;
}

double PackSystem::lipschitz(std::span<const double> v) const {
  const auto& p = params_;
  const std::size_t n = p.N;
  const double u = v[n];
  double H = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    H += v[i];
    mass += std::abs(v[i]);
  }
  const double base = -p.omega + p.k * u;
  const double others = static_cast<double>(n) - 1.0;
  const double prey_diag = std::abs(p.lambda - 2.0 * p.mu * u - p.k * H);
  double rows = static_cast<double>(n) * p.k * std::abs(u) + prey_diag;
  double cols = p.k * mass + prey_diag;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = std::abs(v[i]);
    const double diag = std::abs(base - p.beta * (H - v[i]));
    rows = std::max(rows, diag + (others * p.beta + p.k) * wi);
    cols = std::max(cols, diag + p.beta * (mass - wi) + p.k * std::abs(u));
  }
  return std::sqrt(rows * cols);
}

ReducedSystem::ReducedSystem(ModelParams p, double beta_eff, DiffusivityPairing pairing)
    : params_(p), beta_eff_(beta_eff) {
  if (!(beta_eff >= 0.0)) throw std::invalid_argument("ReducedSystem: beta_eff must be ≥ 0");
  if (pairing == DiffusivityPairing::Crossed) {
    diff_H_ = p.D;
    diff_u_ = p.d;
  } else {
    diff_H_ = p.d;
    diff_u_ = p.D;
  }
}

ReducedState ReducedSystem::coexistence() const { return mimura_states(params_, beta_eff_)[2]; }

void ReducedSystem::rates(std::span<const double> v, std::span<double> out) const {
  const auto& p = params_;
  out[0] = (-p.omega + p.k * v[1] - beta_eff_ * v[0]) * v[0];
  out[1] = (p.lambda - p.mu * v[1] - p.k * v[0]) * v[1];
}

void ReducedSystem::jacobian(std::span<const double> v, std::span<double> out) const {
  const auto& p = params_;
  out[0] = -p.omega + p.k * v[1] - 2.0 * beta_eff_ * v[0];
  out[1] = p.k * v[0];
  out[2] = -p.k * v[1];
  out[3] = p.lambda - 2.0 * p.mu * v[1] - p.k * v[0];
}

Field residual_field(const ReactionSystem& sys, const Field& s) {
  if (s.components() != sys.components()) throw std::invalid_argument("residual: component count mismatch");
  Field r(s.grid(), s.components());
  for (std::size_t c = 0; c < s.components(); ++c) {
    laplacian_apply(s.grid(), s.component(c), r.component(c));
    const double dc = sys.diffusivity(c);
    for (auto& x : r.component(c)) x *= dc;
  }
  std::vector<double> v(s.components()), rate(s.components());
  for (std::size_t j = 0; j < s.cells(); ++j) {
    s.gather(j, v);
    sys.rates(v, rate);
    for (std::size_t c = 0; c < s.components(); ++c) r.at(c, j) += rate[c];
  }
  return r;
}

double steady_residual(const ReactionSystem& sys, const Field& s) {
  const Field r = residual_field(sys, s);
  double worst = 0.0;
  for (double x : r.data()) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(x));
  }
  return worst;
}

}  // namespace packs
