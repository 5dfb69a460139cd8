#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "packs/model.hpp"

namespace packs {

struct SpectrumEntry {
  std::complex<double> value;
  std::size_t multiplicity = 1;
};

/// Eigenvalues of a linearization block, with multiplicities.
struct Spectrum {
  std::vector<SpectrumEntry> entries;

  std::size_t dimension() const;
  /// Each eigenvalue repeated by its multiplicity.
  std::vector<std::complex<double>> expanded() const;
};

// ExtinctionUnstable is reserved for the w = 0 states; the coexistence
// classifier below never returns it.
enum class StabilityLabel { StableN1, WeaklyStableSimplex, StronglyUnstable, ExtinctionUnstable };

std::string_view to_string(StabilityLabel label);

struct StabilityVerdict {
  StabilityLabel label = StabilityLabel::StableN1;
  /// Unit unstable direction, present only for StronglyUnstable.
  std::optional<Eigen::VectorXd> witness;
};

/// Jacobian of the reaction terms at the constant coexistence state.
Eigen::MatrixXd linearized_matrix(const ModelParams& p);

/// beta*w with multiplicity N-1, plus the two roots of
///   g^2 + g (mu u + (N-1) beta w) + ((N-1) beta mu + N k^2) u w.
Spectrum spectrum_closed_form(const ModelParams& p);

/// Roots of g^2 + b g + c, computed without cancellation.
std::pair<std::complex<double>, std::complex<double>> stable_quadratic_roots(double b, double c);

/// Dense general eigensolve. Throws std::invalid_argument for non-square input.
std::vector<std::complex<double>> spectrum_numeric(const Eigen::MatrixXd& m);

/// Largest distance in an optimal-by-greedy pairing of two eigenvalue multisets.
/// Returns +inf when the sizes differ.
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

StabilityVerdict classify_constant_stability(const ModelParams& p);

/// Linearization restricted to the Neumann eigenmode with -Laplacian eigenvalue
/// `nu`: A - nu * diag(d, ..., d, D). Stability read off this block is a
/// heuristic for nonconstant modes when d != D; only the constant mode is
/// backed by the classification theory.
Eigen::MatrixXd mode_block(const ModelParams& p, double nu);

/// Closed-form spectrum of mode_block: the pack-difference eigenvalue
/// beta*w - nu*d (multiplicity N-1) and the two roots of the symmetric block.
Spectrum mode_spectrum(const ModelParams& p, double nu);

}  // namespace packs
