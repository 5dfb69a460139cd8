#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace packs {

/// Cell-centred grid on an interval or a rectangle with homogeneous Neumann
/// boundaries, realised by mirror ghost cells (a_{-1} = a_0, a_M = a_{M-1}).
/// Storage order is x-fastest: index = ix + cells[0] * iy.
class Grid {
 public:
  static constexpr std::size_t kMinCells = 4;

  Grid() = default;

  std::size_t dim() const { return dim_; }
  double length(std::size_t axis) const { return lengths_.at(axis); }
  std::size_t cells(std::size_t axis) const { return cells_.at(axis); }
  double spacing(std::size_t axis) const { return lengths_.at(axis) / static_cast<double>(cells_.at(axis)); }

  std::size_t size() const { return cells_[0] * (dim_ == 2 ? cells_[1] : 1); }
  double cell_volume() const;
  double volume() const;
  /// Cell-centre coordinate along `axis`.
  double center(std::size_t axis, std::size_t i) const { return (static_cast<double>(i) + 0.5) * spacing(axis); }

  bool operator==(const Grid&) const = default;

  friend Grid build_grid(std::size_t dim, std::span<const double> lengths, std::span<const std::size_t> cells);

 private:
  std::size_t dim_ = 1;
  std::array<double, 2> lengths_{1.0, 1.0};
  std::array<std::size_t, 2> cells_{kMinCells, 1};
};

/// Throws std::invalid_argument unless dim is 1 or 2, one length and one
/// cell count per axis are given, lengths are positive and cells ≥ 4.
Grid build_grid(std::size_t dim, std::span<const double> lengths, std::span<const std::size_t> cells);

inline Grid build_grid_1d(double length, std::size_t cells) {
  const double l[] = {length};
  const std::size_t c[] = {cells};
  return build_grid(1, l, c);
}

/// Second-order Neumann Laplacian. Throws on size mismatch.
std::vector<double> laplacian_apply(const Grid& g, std::span<const double> a);
void laplacian_apply(const Grid& g, std::span<const double> a, std::span<double> out);

/// Per-axis Neumann mode numbers; the second entry is ignored in 1D.
struct Mode {
  std::size_t mx = 0;
  std::size_t my = 0;
};

struct ModeEigenvalue {
  double continuous = 0.0;  // sum over axes of (m pi / L)^2
  double discrete = 0.0;    // sum over axes of (2/h^2)(1 - cos(m pi / M))
};

/// Eigenvalues of -Laplacian for the given mode. Throws std::out_of_range
/// when a mode number is not below the cell count of its axis.
ModeEigenvalue neumann_eigenvalues(const Grid& g, Mode m);

/// Nodal values of the discrete eigenvector cos(m pi (j + 1/2) / M) (tensor
/// product in 2D).
std::vector<double> neumann_mode(const Grid& g, Mode m);

/// Sum over cells of a * b * cell volume.
double inner(const Grid& g, std::span<const double> a, std::span<const double> b);

/// Solves (I - tau * Laplacian) x = b in place for tau ≥ 0. In 1D this is a
/// Thomas sweep; in 2D the x-direction is diagonalised by the orthonormal
/// Neumann cosine basis and each x-mode is a tridiagonal solve in y.
class DiffusionSolver {
 public:
  explicit DiffusionSolver(const Grid& g);

  void solve(double tau, std::span<double> b) const;
  const Grid& grid() const { return grid_; }

 private:
  void solve_tridiagonal(double diag_shift, double tau, double h, std::span<double> b) const;

  Grid grid_;
  std::vector<double> basis_;     // cells_x * cells_x, row p = mode p
  std::vector<double> eig_x_;     // discrete -Laplacian eigenvalues along x
  mutable std::vector<double> scratch_;
  mutable std::vector<double> line_;
  mutable std::vector<double> cprime_;
};

}  // namespace packs
