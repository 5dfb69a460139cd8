#include "packs/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace packs {

ValidationReport validate_params(const ModelParams& p) {
  ValidationReport r;
  auto positive = [&](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) r.violations.push_back(std::string(name) + " > 0");
  };
  positive(p.d, "d");
  positive(p.D, "D");
  positive(p.omega, "omega");
  positive(p.k, "k");
  positive(p.lambda, "lambda");
  positive(p.mu, "mu");
  if (!(std::isfinite(p.beta) && p.beta >= 0.0)) r.violations.push_back("beta ≥ 0");
  if (p.N < 1) r.violations.push_back("N ≥ 1");
  if (p.N > kMaxPacks) r.violations.push_back("N ≤ 1000000");
  if (!(p.lambda * p.k > p.mu * p.omega)) {
    r.violations.push_back("λk ≤ μω (viability requires lambda*k > mu*omega)");
  }
  return r;
}

void require_valid(const ModelParams& p) {
  const auto report = validate_params(p);
  if (report.ok()) return;
  std::ostringstream os;
  os << "invalid model parameters:";
  for (const auto& v : report.violations) os << " [" << v << "]";
  throw std::invalid_argument(os.str());
}

std::vector<double> ConstantState::expand() const {
  std::vector<double> v(N + 1, w);
  v.back() = u;
  return v;
}

void reaction_terms(const ModelParams& p, std::span<const double> state, std::span<double> out) {
  const std::size_t n = state.size() - 1;
  const double u = state[n];
  double H = 0.0;
  for (std::size_t i = 0; i < n; ++i) H += state[i];
  const double base = -p.omega + p.k * u;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = state[i];
    // Sum over j != i, formed as H - w_i.
    out[i] = (base - p.beta * (H - wi)) * wi;
  }
  out[n] = (p.lambda - p.mu * u - p.k * H) * u;
}

std::vector<double> reaction_terms(const ModelParams& p, std::span<const double> w, double u) {
  std::vector<double> state(w.begin(), w.end());
  state.push_back(u);
  std::vector<double> out(state.size());
  reaction_terms(p, state, out);
  return out;
}

ConstantState constant_coexistence_state(const ModelParams& p) {
  require_valid(p);
  const double n = static_cast<double>(p.N);
  const double denom = p.mu * p.beta * (n - 1.0) + n * p.k * p.k;
  ConstantState s;
  s.N = p.N;
  s.w = (p.lambda * p.k - p.mu * p.omega) / denom;
  s.u = (p.lambda * p.beta * (n - 1.0) + p.omega * p.k * n) / denom;
  return s;
}

std::array<ReducedState, 3> mimura_states(const ModelParams& p, double beta_eff) {
  if (!(beta_eff >= 0.0)) throw std::invalid_argument("beta_eff must be ≥ 0");
  const double denom = p.k * p.k + p.mu * beta_eff;
  return {ReducedState{0.0, 0.0}, ReducedState{0.0, p.lambda / p.mu},
          ReducedState{(p.lambda * p.k - p.mu * p.omega) / denom,
                       (p.omega * p.k + p.lambda * beta_eff) / denom}};
}

PopulationComparison total_population(const ModelParams& p, double domain_volume) {
  require_valid(p);
  if (!(domain_volume > 0.0)) throw std::invalid_argument("domain volume must be > 0");
  const double n = static_cast<double>(p.N);
  const double k2 = p.k * p.k;
  const double surplus = p.lambda * p.k - p.mu * p.omega;
  const double denom = p.mu * p.beta * (n - 1.0) + n * k2;
  PopulationComparison c;
  c.packs_total = surplus * n / denom * domain_volume;
  c.single_total = surplus / k2 * domain_volume;
  // Formed directly so beta = 0 or N = 1 gives exactly 1.
  c.ratio = n * k2 / denom;
  return c;
}

}  // namespace packs
