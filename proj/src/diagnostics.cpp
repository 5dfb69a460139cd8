#include <algorithm>
#include <cmath>

#include "packs/dynamics.hpp"

namespace packs {

namespace {

// Sum over interior faces of (a_r - a_l)^2 / (h^2 a_l a_r), times cell volume.
double log_gradient_energy(const Grid& g, std::span<const double> a) {
  const std::size_t mx = g.cells(0);
  const std::size_t my = g.dim() == 2 ? g.cells(1) : 1;
  double sum = 0.0;
  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (std::size_t j = 0; j < my; ++j) {
    for (std::size_t i = 0; i + 1 < mx; ++i) {
      const double l = a[i + mx * j], r = a[i + 1 + mx * j];
      sum += (r - l) * (r - l) * ihx2 / (l * r);
    }
  }
  if (g.dim() == 2) {
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (std::size_t j = 0; j + 1 < my; ++j) {
      for (std::size_t i = 0; i < mx; ++i) {
        const double l = a[i + mx * j], r = a[i + mx * (j + 1)];
        sum += (r - l) * (r - l) * ihy2 / (l * r);
      }
    }
  }
  return sum * g.cell_volume();
}

}  // namespace

IdentityValues mimura_identity_check(const ReducedSystem& sys, const Field& s) {
  if (s.components() != 2) throw std::invalid_argument("mimura_identity_check: expected (H, u) field");
  for (double x : s.data()) {
    if (!(x > 0.0)) throw std::invalid_argument("mimura_identity_check: nodal values must be strictly positive");
  }
  const auto star = sys.coexistence();
  const auto H = s.component(0);
  const auto u = s.component(1);
  const double mu = sys.params().mu;

  IdentityValues out;
  double sum = 0.0;
  for (std::size_t j = 0; j < s.cells(); ++j) {
    const double dh = H[j] - star.H;
    const double du = u[j] - star.u;
    sum += sys.beta_eff() * dh * dh + mu * du * du;
  }
  out.reaction = sum * s.grid().cell_volume();
  out.dirichlet = -star.H * sys.diffusivity(0) * log_gradient_energy(s.grid(), H) -
                  star.u * sys.diffusivity(1) * log_gradient_energy(s.grid(), u);
  return out;
}

std::vector<OrderedPair> ordering_rigidity_probe(const Field& s, double delta) {
  std::vector<OrderedPair> out;
  const std::size_t packs = s.components() == 0 ? 0 : s.components() - 1;
  std::vector<double> peak(packs);
  for (std::size_t i = 0; i < packs; ++i) peak[i] = *std::ranges::max_element(s.component(i));

  for (std::size_t i = 0; i < packs; ++i) {
    const auto wi = s.component(i);
    for (std::size_t j = 0; j < packs; ++j) {
      if (i == j || !(peak[j] > delta)) continue;
      const auto wj = s.component(j);
      bool dominates = true;
      double gap = 0.0;
      for (std::size_t c = 0; c < s.cells() && dominates; ++c) {
        dominates = wi[c] >= wj[c] + delta;
        gap = std::max(gap, std::abs(wi[c] - wj[c]));
      }
      if (dominates && gap > delta) out.push_back({i, j});
    }
  }
  return out;
}

}  // namespace packs
