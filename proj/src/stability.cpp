#include "packs/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace packs {

std::size_t Spectrum::dimension() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.multiplicity;
  return n;
}

std::vector<std::complex<double>> Spectrum::expanded() const {
  std::vector<std::complex<double>> out;
  out.reserve(dimension());
  for (const auto& e : entries) out.insert(out.end(), e.multiplicity, e.value);
  return out;
}

std::string_view to_string(StabilityLabel label) {
  switch (label) {
    case StabilityLabel::StableN1: return "StableN1";
    case StabilityLabel::WeaklyStableSimplex: return "WeaklyStableSimplex";
    case StabilityLabel::StronglyUnstable: return "StronglyUnstable";
    case StabilityLabel::ExtinctionUnstable: return "ExtinctionUnstable";
  }
  return "?";
}

Eigen::MatrixXd linearized_matrix(const ModelParams& p) {
  const auto c = constant_coexistence_state(p);
  const auto n = static_cast<Eigen::Index>(p.N);
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n + 1, n + 1, -p.beta * c.w);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 0.0;
    a(i, n) = p.k * c.w;
    a(n, i) = -p.k * c.u;
  }
  a(n, n) = -p.mu * c.u;
  return a;
}

std::pair<std::complex<double>, std::complex<double>> stable_quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) {
    const double re = -0.5 * b;
    const double im = 0.5 * std::sqrt(-disc);
    return {{re, im}, {re, -im}};
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
  return {{q, 0.0}, {c / q, 0.0}};
}

namespace {

// Quadratic factor of the characteristic polynomial restricted to the
// pack-symmetric subspace (W_1 = ... = W_N, U) at Laplacian eigenvalue nu.
Spectrum assemble(const ModelParams& p, double nu) {
  const auto s = constant_coexistence_state(p);
  const double m = static_cast<double>(p.N) - 1.0;
  const double n = static_cast<double>(p.N);
  const double pred = m * p.beta * s.w + nu * p.d;
  const double prey = p.mu * s.u + nu * p.D;
  const double b = pred + prey;
  const double c = pred * prey + n * p.k * p.k * s.u * s.w;
  const auto [l1, l2] = stable_quadratic_roots(b, c);

  Spectrum out;
  if (p.N >= 2) out.entries.push_back({{p.beta * s.w - nu * p.d, 0.0}, p.N - 1});
  out.entries.push_back({l1, 1});
  out.entries.push_back({l2, 1});
  return out;
}

}  // namespace

Spectrum spectrum_closed_form(const ModelParams& p) { return assemble(p, 0.0); }

std::vector<std::complex<double>> spectrum_numeric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectrum_numeric: matrix is not square");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum_numeric: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(x - b[j]);
      if (dist < best_d) {
        best_d = dist;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

StabilityVerdict classify_constant_stability(const ModelParams& p) {
  require_valid(p);
  StabilityVerdict v;
  if (p.N == 1) {
    v.label = StabilityLabel::StableN1;
  } else if (p.beta == 0.0) {
    v.label = StabilityLabel::WeaklyStableSimplex;
  } else {
    v.label = StabilityLabel::StronglyUnstable;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.N) + 1);
    dir(0) = 1.0 / std::sqrt(2.0);
    dir(1) = -1.0 / std::sqrt(2.0);
    v.witness = std::move(dir);
  }
  return v;
}

Eigen::MatrixXd mode_block(const ModelParams& p, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("mode_block: Laplacian eigenvalue must be ≥ 0");
  Eigen::MatrixXd a = linearized_matrix(p);
  const auto n = static_cast<Eigen::Index>(p.N);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) -= nu * p.d;
  a(n, n) -= nu * p.D;
  return a;
}

Spectrum mode_spectrum(const ModelParams& p, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("mode_spectrum: Laplacian eigenvalue must be ≥ 0");
  return assemble(p, nu);
}

}  // namespace packs
