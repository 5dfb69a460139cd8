#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "packs/dynamics.hpp"

namespace packs {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Neumann Laplacian stencil entries for cell `j` (x-fastest ordering).
template <class Emit>
void laplacian_row(const Grid& g, std::size_t j, Emit emit) {
  const std::size_t mx = g.cells(0);
  const std::size_t ix = j % mx;
  const std::size_t iy = j / mx;
  const double cx = 1.0 / (g.spacing(0) * g.spacing(0));
  if (ix > 0) emit(j - 1, cx), emit(j, -cx);
  if (ix + 1 < mx) emit(j + 1, cx), emit(j, -cx);
  if (g.dim() == 2) {
    const std::size_t my = g.cells(1);
    const double cy = 1.0 / (g.spacing(1) * g.spacing(1));
    if (iy > 0) emit(j - mx, cy), emit(j, -cy);
    if (iy + 1 < my) emit(j + mx, cy), emit(j, -cy);
  }
}

SparseMatrix assemble_jacobian(const ReactionSystem& sys, const Field& s) {
  const std::size_t nc = s.components();
  const std::size_t m = s.cells();
  std::vector<Triplet> trip;
  trip.reserve(m * (nc * nc + nc * 5));
  std::vector<double> v(nc), jac(nc * nc);
  for (std::size_t j = 0; j < m; ++j) {
    s.gather(j, v);
    sys.jacobian(v, jac);
    for (std::size_t r = 0; r < nc; ++r) {
      for (std::size_t c = 0; c < nc; ++c) {
        const double x = jac[r * nc + c];
        if (x != 0.0 || r == c) trip.emplace_back(static_cast<int>(r * m + j), static_cast<int>(c * m + j), x);
      }
      const double dr = sys.diffusivity(r);
      laplacian_row(s.grid(), j, [&](std::size_t col, double w) {
        trip.emplace_back(static_cast<int>(r * m + j), static_cast<int>(r * m + col), dr * w);
      });
    }
  }
  SparseMatrix J(static_cast<Eigen::Index>(nc * m), static_cast<Eigen::Index>(nc * m));
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

double max_norm(std::span<const double> x) {
  double worst = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) return INFINITY;
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

double two_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

NewtonResult newton_steady(const ReactionSystem& sys, const Field& guess, const NewtonOptions& opt) {
  if (guess.components() != sys.components()) throw std::invalid_argument("newton_steady: component count mismatch");
  NewtonResult res;
  res.state = guess;
  if (!guess.all_finite()) {
    res.diagnostic = "non-finite initial guess";
    res.residual = INFINITY;
    return res;
  }

  Field F = residual_field(sys, res.state);
  res.residual = max_norm(F.data());
  double merit = two_norm(F.data());

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;

  while (res.residual >= opt.tol) {
    if (res.iterations >= opt.max_iters) {
      std::ostringstream os;
      os << "iteration cap " << opt.max_iters << " reached, residual " << res.residual;
      res.diagnostic = os.str();
      return res;
    }
    const SparseMatrix J = assemble_jacobian(sys, res.state);
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      res.diagnostic = "singular Jacobian: " + lu.lastErrorMessage();
      return res;
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(F.data().data(), static_cast<Eigen::Index>(F.data().size()));
    const Eigen::VectorXd delta = lu.solve(-rhs);
    if (lu.info() != Eigen::Success || !delta.allFinite()) {
      res.diagnostic = "singular Jacobian: linear solve failed";
      return res;
    }

    double alpha = 1.0;
    bool accepted = false;
    Field trial = res.state;
    Field Ft;
    for (std::size_t halving = 0; halving <= opt.max_halvings; ++halving, alpha *= 0.5) {
      auto dst = trial.data();
      const auto src = res.state.data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + alpha * delta[static_cast<Eigen::Index>(i)];
      Ft = residual_field(sys, trial);
      const double m = two_norm(Ft.data());
      if (std::isfinite(m) && m < (1.0 - 1e-4 * alpha) * merit) {
        accepted = true;
        merit = m;
        break;
      }
    }
    ++res.iterations;
    if (!accepted) {
      std::ostringstream os;
      os << "line search failed after " << opt.max_halvings << " halvings, residual " << res.residual;
      res.diagnostic = os.str();
      return res;
    }
    res.state = std::move(trial);
    F = std::move(Ft);
    res.residual = max_norm(F.data());
  }
  res.converged = true;
  return res;
}

}  // namespace packs
