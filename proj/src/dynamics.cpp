#include "packs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace packs {

namespace {

constexpr std::size_t kMaxRecordedViolations = 1000;

void apply_reaction(const ReactionSystem& sys, Field& s, double dt) {
  const std::size_t nc = s.components();
  std::vector<double> v(nc), rate(nc);
  for (std::size_t j = 0; j < s.cells(); ++j) {
    s.gather(j, v);
    sys.rates(v, rate);
    for (std::size_t c = 0; c < nc; ++c) s.at(c, j) = v[c] + dt * rate[c];
  }
}

struct Extremes {
  double max_u = 0.0;
  double sum_w_max = 0.0;
};

Extremes extremes(const Field& s) {
  Extremes e;
  const auto u = s.component(s.components() - 1);
  e.max_u = *std::ranges::max_element(u);
  const auto H = s.aggregate_predators();
  e.sum_w_max = H.empty() ? 0.0 : *std::ranges::max_element(H);
  return e;
}

}  // namespace

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::PreyAboveCarryingCapacity: return "prey_above_carrying_capacity";
    case BoundKind::AggregateAboveCap: return "aggregate_above_cap";
  }
  return "?";
}

std::string_view to_string(SolutionLabel l) {
  switch (l) {
    case SolutionLabel::Constant: return "Constant";
    case SolutionLabel::NonConstant: return "NonConstant";
    case SolutionLabel::NoConvergence: return "NoConvergence";
  }
  return "?";
}

Field step_imex(const ReactionSystem& sys, const DiffusionSolver& solver, const Field& s, double dt,
                StepStats* stats) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be > 0");
  if (s.components() != sys.components()) throw std::invalid_argument("step_imex: component count mismatch");
  Field next = s;
  apply_reaction(sys, next, dt);
  for (std::size_t c = 0; c < next.components(); ++c) solver.solve(dt * sys.diffusivity(c), next.component(c));
  std::size_t clamped = 0;
  for (double& x : next.data()) {
    if (x < -kUndershootTolerance) {
      x = 0.0;
      ++clamped;
    }
  }
  if (stats) stats->clamped += clamped;
  return next;
}

Field step_imex(const ModelParams& p, const Grid& g, const Field& s, double dt) {
  const PackSystem sys(p);
  const DiffusionSolver solver(g);
  return step_imex(sys, solver, s, dt);
}

double lipschitz_step_cap(const ReactionSystem& sys, const Field& s, double safety) {
  std::vector<double> v(s.components());
  double lip = 0.0;
  for (std::size_t j = 0; j < s.cells(); ++j) {
    s.gather(j, v);
    lip = std::max(lip, sys.lipschitz(v));
  }
  return lip > 0.0 ? safety / lip : std::numeric_limits<double>::infinity();
}

EvolveReport evolve(const ReactionSystem& sys, Field s0, const EvolveOptions& opt) {
  if (!(opt.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!(opt.horizon >= 0.0)) throw std::invalid_argument("evolve: horizon must be ≥ 0");
  if (s0.components() != sys.components()) throw std::invalid_argument("evolve: component count mismatch");
  if (!s0.all_finite()) throw std::invalid_argument("evolve: initial state is not finite");

  const DiffusionSolver solver(s0.grid());
  EvolveReport rep;
  Field s = std::move(s0);
  const std::size_t check_stride = std::max<std::size_t>(1, opt.check_stride);
  const std::size_t history_stride = std::max<std::size_t>(1, opt.history_stride);

  auto monitor = [&](std::size_t step, const Extremes& e) {
    rep.peak_u = std::max(rep.peak_u, e.max_u);
    rep.peak_sum_w = std::max(rep.peak_sum_w, e.sum_w_max);
    if (rep.bound_violations.size() >= kMaxRecordedViolations) return;
    if (opt.prey_cap && e.max_u > *opt.prey_cap) {
      rep.bound_violations.push_back({step, BoundKind::PreyAboveCarryingCapacity, e.max_u});
    }
    if (opt.aggregate_cap && e.sum_w_max > *opt.aggregate_cap) {
      rep.bound_violations.push_back({step, BoundKind::AggregateAboveCap, e.sum_w_max});
    }
  };

  Extremes ext = extremes(s);
  rep.initial_sum_w_max = ext.sum_w_max;
  monitor(0, ext);
  double residual = steady_residual(sys, s);
  rep.residual_history.push_back({0, 0.0, residual, ext.max_u, ext.sum_w_max});

  double t = 0.0;
  std::size_t step = 0;
  StepStats stats;
  bool done = opt.stop_when_steady && residual < opt.steady_tol;
  const double t_end = opt.horizon * (1.0 - 1e-14);
  while (!done && t < t_end) {
    const double dt = std::min({opt.dt, lipschitz_step_cap(sys, s, opt.lipschitz_safety), opt.horizon - t});
    Field next = step_imex(sys, solver, s, dt, &stats);
    if (!next.all_finite()) throw NonFiniteState(std::move(s), step + 1);
    s = std::move(next);
    ++step;
    t += dt;
    ext = extremes(s);
    monitor(step, ext);
    if (opt.observer) opt.observer(step, t, s);

    const bool at_end = t >= t_end;
    const bool sample = step % history_stride == 0;
    if (step % check_stride == 0 || sample || at_end) {
      residual = steady_residual(sys, s);
      if (sample || at_end) rep.residual_history.push_back({step, t, residual, ext.max_u, ext.sum_w_max});
      if (opt.stop_when_steady && residual < opt.steady_tol) {
        if (!sample && !at_end) rep.residual_history.push_back({step, t, residual, ext.max_u, ext.sum_w_max});
        done = true;
      }
    }
  }

  rep.final_residual = steady_residual(sys, s);
  rep.converged = rep.final_residual < opt.steady_tol;
  rep.steps = step;
  rep.time = t;
  rep.clamp_events = stats.clamped;
  rep.final = std::move(s);
  return rep;
}

EvolveReport evolve(const ModelParams& p, Field s0, EvolveOptions opt) {
  const PackSystem sys(p);
  if (!opt.prey_cap) opt.prey_cap = p.lambda / p.mu * (1.0 + 1e-8);
  if (!opt.aggregate_cap) {
    const auto agg = s0.aggregate_predators();
    const double initial = agg.empty() ? 0.0 : *std::ranges::max_element(agg);
    const double single_pack = (p.lambda * p.k - p.mu * p.omega) / (p.k * p.k);
    opt.aggregate_cap = 10.0 * std::max(initial, single_pack);
  }
  return evolve(sys, std::move(s0), opt);
}

double flatness(const Field& s, double floor) {
  double worst = 0.0;
  for (std::size_t c = 0; c < s.components(); ++c) {
    const auto comp = s.component(c);
    if (comp.empty()) continue;
    const auto [lo, hi] = std::ranges::minmax_element(comp);
    double mean = 0.0;
    for (double x : comp) mean += x;
    mean /= static_cast<double>(comp.size());
    worst = std::max(worst, (*hi - *lo) / std::max(std::abs(mean), floor));
  }
  return worst;
}

Classification classify_solution(const Field& s, double flatness_tol, bool converged) {
  Classification c;
  c.flatness = flatness(s);
  if (!converged || !s.all_finite()) {
    c.label = SolutionLabel::NoConvergence;
  } else {
    c.label = c.flatness < flatness_tol ? SolutionLabel::Constant : SolutionLabel::NonConstant;
  }
  return c;
}

}  // namespace packs
