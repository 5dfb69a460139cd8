#include "packs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace packs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view section, std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = splitmix64(master ^ fnv1a64(section));
  for (auto i : indices) h = splitmix64(h ^ i);
  return h;
}

Field perturbed_constant(const ModelParams& p, const Grid& g, PerturbationKind kind, double amplitude,
                         std::uint64_t seed) {
  const auto c = constant_coexistence_state(p);
  Field f = Field::broadcast(g, c.expand());
  if (kind == PerturbationKind::EigenDirection) {
    const std::size_t mx = g.cells(0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.center(0, j % mx);
      const double profile = 0.5 * (1.0 + std::cos(std::numbers::pi * x / g.length(0)));
      const double eps = amplitude * profile;
      // Component 1 is the second pack, or the prey when N = 1.
      f.at(0, j) *= 1.0 + eps;
      f.at(1, j) *= 1.0 - eps;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shape(-1.0, 1.0);
    for (double& x : f.data()) x *= 1.0 + amplitude * shape(rng);
  }
  return f;
}

RunOutcome run_protocol_once(const ModelParams& p, const Grid& g, PerturbationKind kind, const Protocol& protocol,
                             std::uint64_t seed) {
  RunOutcome out;
  const Field s0 = perturbed_constant(p, g, kind, protocol.amplitude, seed);
  EvolveOptions opt;
  opt.horizon = protocol.horizon;
  opt.dt = protocol.dt;
  opt.steady_tol = protocol.steady_tol;
  bool converged = false;
  try {
    auto rep = evolve(p, s0, opt);
    out.steps = rep.steps;
    out.evolve_converged = rep.converged;
    out.bound_violations = rep.bound_violations.size();
    out.prey_bound_violations = static_cast<std::size_t>(std::ranges::count_if(
        rep.bound_violations, [](const BoundViolation& v) { return v.kind == BoundKind::PreyAboveCarryingCapacity; }));
    out.initial_sum_w_max = rep.initial_sum_w_max;
    out.peak_sum_w = rep.peak_sum_w;
    out.peak_u = rep.peak_u;
    converged = rep.converged;
    out.state = std::move(rep.final);
  } catch (const NonFiniteState& e) {
    out.state = e.last_finite();
    out.diagnostic = e.what();
  }
  if (!converged && protocol.newton_polish && out.diagnostic.empty()) {
    NewtonOptions nopt;
    nopt.max_iters = protocol.newton_max_iters;
    nopt.tol = protocol.steady_tol;
    auto res = newton_steady(PackSystem(p), out.state, nopt);
    out.polished = true;
    converged = res.converged;
    out.diagnostic = res.diagnostic;
    out.state = std::move(res.state);
  }
  out.classification = classify_solution(out.state, protocol.flatness_tol, converged);
  return out;
}

namespace {

SweepCell evaluate_cell(const ModelParams& base, double beta, std::size_t N, std::size_t bi, std::size_t ni,
                        const Grid& grid, const Protocol& protocol, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  SweepCell cell;
  cell.beta = beta;
  cell.N = N;
  const ModelParams p = base.with_beta(beta).with_packs(N);

  bool any_nonconstant = false;
  bool any_failed = false;
  double worst_flat = 0.0;
  if (!validate_params(p).ok()) {
    any_failed = true;
  } else {
    for (std::size_t r = 0; r < protocol.runs; ++r) {
      const std::uint64_t s = derive_seed(seed, "sweep", {bi, ni, r});
      cell.seeds.push_back(s);
      const auto kind = r == 0 ? PerturbationKind::EigenDirection : PerturbationKind::Noise;
      RunOutcome o;
      try {
        o = run_protocol_once(p, grid, kind, protocol, s);
      } catch (const std::exception& e) {
        o.classification.label = SolutionLabel::NoConvergence;
        o.diagnostic = e.what();
      }
      switch (o.classification.label) {
        case SolutionLabel::Constant: worst_flat = std::max(worst_flat, o.classification.flatness); break;
        case SolutionLabel::NonConstant:
          any_nonconstant = true;
          worst_flat = std::max(worst_flat, o.classification.flatness);
          break;
        case SolutionLabel::NoConvergence: any_failed = true; break;
      }
      if (!protocol.keep_states) o.state = Field();
      cell.outcomes.push_back(std::move(o));
    }
  }
  cell.runs = cell.outcomes.size();
  cell.classification.flatness = worst_flat;
  if (any_nonconstant) {
    cell.classification.label = SolutionLabel::NonConstant;
  } else if (any_failed) {
    cell.classification.label = SolutionLabel::NoConvergence;
  } else {
    cell.classification.label = SolutionLabel::Constant;
  }
  cell.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

}  // namespace

SweepResult run_sweep(const ModelParams& base, const std::vector<double>& beta_grid,
                      const std::vector<std::size_t>& N_grid, const Grid& grid, const Protocol& protocol,
                      std::uint64_t seed, unsigned threads) {
  if (beta_grid.empty() || N_grid.empty()) throw std::invalid_argument("run_sweep: grids must be nonempty");
  SweepResult r;
  r.beta_grid = beta_grid;
  r.N_grid = N_grid;
  const std::size_t total = beta_grid.size() * N_grid.size();
  r.cells.resize(total);

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const std::size_t b = idx / N_grid.size();
      const std::size_t n = idx % N_grid.size();
      r.cells[idx] = evaluate_cell(base, beta_grid[b], N_grid[n], b, n, grid, protocol, seed);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  r.frontier.assign(N_grid.size(), std::nullopt);
  for (std::size_t n = 0; n < N_grid.size(); ++n) {
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
      const auto& c = r.at(b, n);
      if (c.classification.label != SolutionLabel::NonConstant) continue;
      if (!r.frontier[n] || c.beta < *r.frontier[n]) r.frontier[n] = c.beta;
    }
  }
  return r;
}

std::string_view to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Estimated: return "estimated";
    case ThresholdStatus::UnboundedInRange: return "unbounded_in_range";
    case ThresholdStatus::BelowRange: return "below_range";
    case ThresholdStatus::AboveRange: return "above_range";
  }
  return "?";
}

Thresholds estimate_thresholds(const SweepResult& r) {
  const std::size_t nb = r.beta_grid.size();
  const std::size_t nn = r.N_grid.size();
  auto nonconstant = [&](std::size_t b, std::size_t n) {
    return r.at(b, n).classification.label == SolutionLabel::NonConstant;
  };

  // Columns in increasing beta, rows in increasing N.
  std::vector<std::size_t> by_beta(nb), by_N(nn);
  for (std::size_t i = 0; i < nb; ++i) by_beta[i] = i;
  for (std::size_t i = 0; i < nn; ++i) by_N[i] = i;
  std::ranges::sort(by_beta, {}, [&](std::size_t i) { return r.beta_grid[i]; });
  std::ranges::sort(by_N, {}, [&](std::size_t i) { return r.N_grid[i]; });

  std::vector<bool> column_bad(nb, false), row_bad(nn, false);
  bool any = false;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t n = 0; n < nn; ++n) {
      if (nonconstant(b, n)) {
        column_bad[b] = row_bad[n] = any = true;
      }
    }
  }

  Thresholds t;
  if (!any) return t;

  std::optional<std::size_t> last_good;
  for (std::size_t b : by_beta) {
    if (column_bad[b]) break;
    last_good = b;
  }
  if (last_good) {
    t.beta_status = ThresholdStatus::Estimated;
    t.beta_bar = r.beta_grid[*last_good];
  } else {
    t.beta_status = ThresholdStatus::BelowRange;
  }

  std::optional<std::size_t> first_good;
  for (auto it = by_N.rbegin(); it != by_N.rend(); ++it) {
    if (row_bad[*it]) break;
    first_good = *it;
  }
  if (first_good) {
    t.N_status = ThresholdStatus::Estimated;
    t.N_bar = r.N_grid[*first_good];
  } else {
    t.N_status = ThresholdStatus::AboveRange;
  }
  return t;
}

}  // namespace packs
