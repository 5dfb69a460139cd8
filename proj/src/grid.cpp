#include "packs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace packs {

Grid build_grid(std::size_t dim, std::span<const double> lengths, std::span<const std::size_t> cells) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (lengths.size() != dim || cells.size() != dim) {
    throw std::invalid_argument("grid: expected " + std::to_string(dim) + " lengths and cell counts");
  }
  Grid g;
  g.dim_ = dim;
  for (std::size_t a = 0; a < dim; ++a) {
    if (!(std::isfinite(lengths[a]) && lengths[a] > 0.0)) throw std::invalid_argument("grid: lengths must be > 0");
    if (cells[a] < Grid::kMinCells) {
      throw std::invalid_argument("grid: at least " + std::to_string(Grid::kMinCells) + " cells per axis");
    }
    g.lengths_[a] = lengths[a];
    g.cells_[a] = cells[a];
  }
  if (dim == 1) {
    g.lengths_[1] = 1.0;
    g.cells_[1] = 1;
  }
  return g;
}

double Grid::cell_volume() const {
  double v = spacing(0);
  if (dim_ == 2) v *= spacing(1);
  return v;
}

double Grid::volume() const { return dim_ == 2 ? lengths_[0] * lengths_[1] : lengths_[0]; }

void laplacian_apply(const Grid& g, std::span<const double> a, std::span<double> out) {
  if (a.size() != g.size() || out.size() != g.size()) throw std::invalid_argument("laplacian_apply: size mismatch");
  const std::size_t mx = g.cells(0);
  const std::size_t my = g.dim() == 2 ? g.cells(1) : 1;
  const double ix2 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (std::size_t j = 0; j < my; ++j) {
    const double* row = a.data() + j * mx;
    double* dst = out.data() + j * mx;
    for (std::size_t i = 0; i < mx; ++i) {
      const double left = row[i == 0 ? 0 : i - 1];
      const double right = row[i + 1 == mx ? i : i + 1];
      dst[i] = ((left - row[i]) + (right - row[i])) * ix2;
    }
  }
  if (g.dim() == 2) {
    const double iy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (std::size_t j = 0; j < my; ++j) {
      const double* row = a.data() + j * mx;
      const double* down = a.data() + (j == 0 ? 0 : j - 1) * mx;
      const double* up = a.data() + (j + 1 == my ? j : j + 1) * mx;
      double* dst = out.data() + j * mx;
      for (std::size_t i = 0; i < mx; ++i) dst[i] += ((down[i] - row[i]) + (up[i] - row[i])) * iy2;
    }
  }
}

std::vector<double> laplacian_apply(const Grid& g, std::span<const double> a) {
  std::vector<double> out(a.size());
  laplacian_apply(g, a, out);
  return out;
}

ModeEigenvalue neumann_eigenvalues(const Grid& g, Mode m) {
  const std::size_t modes[2] = {m.mx, m.my};
  ModeEigenvalue ev;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const std::size_t M = g.cells(a);
    if (modes[a] >= M) throw std::out_of_range("neumann_eigenvalues: mode out of range");
    const double h = g.spacing(a);
    const double theta = std::numbers::pi * static_cast<double>(modes[a]) / static_cast<double>(M);
    const double kc = std::numbers::pi * static_cast<double>(modes[a]) / g.length(a);
    ev.continuous += kc * kc;
    ev.discrete += 2.0 / (h * h) * (1.0 - std::cos(theta));
  }
  return ev;
}

std::vector<double> neumann_mode(const Grid& g, Mode m) {
  neumann_eigenvalues(g, m);  // range check
  const std::size_t mx = g.cells(0);
  const std::size_t my = g.dim() == 2 ? g.cells(1) : 1;
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < my; ++j) {
    const double cy = g.dim() == 2 ? std::cos(std::numbers::pi * static_cast<double>(m.my) *
                                              (static_cast<double>(j) + 0.5) / static_cast<double>(my))
                                   : 1.0;
    for (std::size_t i = 0; i < mx; ++i) {
      v[i + mx * j] = cy * std::cos(std::numbers::pi * static_cast<double>(m.mx) * (static_cast<double>(i) + 0.5) /
                                    static_cast<double>(mx));
    }
  }
  return v;
}

double inner(const Grid& g, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * g.cell_volume();
}

DiffusionSolver::DiffusionSolver(const Grid& g) : grid_(g) {
  if (g.dim() == 2) {
    const std::size_t mx = g.cells(0);
    basis_.resize(mx * mx);
    eig_x_.resize(mx);
    for (std::size_t p = 0; p < mx; ++p) {
      const double scale = std::sqrt((p == 0 ? 1.0 : 2.0) / static_cast<double>(mx));
      for (std::size_t i = 0; i < mx; ++i) {
        basis_[p * mx + i] = scale * std::cos(std::numbers::pi * static_cast<double>(p) *
                                              (static_cast<double>(i) + 0.5) / static_cast<double>(mx));
      }
      eig_x_[p] = neumann_eigenvalues(g, Mode{p, 0}).discrete;
    }
    scratch_.resize(g.size());
  }
  line_.resize(std::max(g.cells(0), g.dim() == 2 ? g.cells(1) : 0));
  cprime_.resize(line_.size());
}

// (1 + shift) x - tau * D2 x = b along one line, D2 the 1D Neumann stencil.
void DiffusionSolver::solve_tridiagonal(double diag_shift, double tau, double h, std::span<double> b) const {
  const std::size_t n = b.size();
  const double off = -tau / (h * h);
  const double centre = 1.0 + diag_shift - 2.0 * off;
  const double edge = 1.0 + diag_shift - off;
  double denom = edge;
  cprime_[0] = off / denom;
  b[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    const double di = (i + 1 == n) ? edge : centre;
    denom = di - off * cprime_[i - 1];
    cprime_[i] = off / denom;
    b[i] = (b[i] - off * b[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) b[i] -= cprime_[i] * b[i + 1];
}

void DiffusionSolver::solve(double tau, std::span<double> b) const {
  if (b.size() != grid_.size()) throw std::invalid_argument("DiffusionSolver: size mismatch");
  // Constants are in the kernel of the Laplacian; skip the solve so uniform
  // states stay bit-exact.
  if (tau == 0.0 || std::ranges::all_of(b, [&](double x) { return x == b[0]; })) return;
  const std::size_t mx = grid_.cells(0);
  if (grid_.dim() == 1) {
    solve_tridiagonal(0.0, tau, grid_.spacing(0), b);
    return;
  }
  const std::size_t my = grid_.cells(1);
  // Forward transform along x: scratch[p + mx*j] = sum_i basis[p][i] b[i + mx*j].
  for (std::size_t j = 0; j < my; ++j) {
    const double* src = b.data() + j * mx;
    for (std::size_t p = 0; p < mx; ++p) {
      const double* q = basis_.data() + p * mx;
      double acc = 0.0;
      for (std::size_t i = 0; i < mx; ++i) acc += q[i] * src[i];
      scratch_[p + mx * j] = acc;
    }
  }
  std::span<double> line(line_.data(), my);
  for (std::size_t p = 0; p < mx; ++p) {
    for (std::size_t j = 0; j < my; ++j) line[j] = scratch_[p + mx * j];
    solve_tridiagonal(tau * eig_x_[p], tau, grid_.spacing(1), line);
    for (std::size_t j = 0; j < my; ++j) scratch_[p + mx * j] = line[j];
  }
  for (std::size_t j = 0; j < my; ++j) {
    double* dst = b.data() + j * mx;
    for (std::size_t i = 0; i < mx; ++i) dst[i] = 0.0;
    for (std::size_t p = 0; p < mx; ++p) {
      const double c = scratch_[p + mx * j];
      const double* q = basis_.data() + p * mx;
      for (std::size_t i = 0; i < mx; ++i) dst[i] += c * q[i];
    }
  }
}

}  // namespace packs
