#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "generators.hpp"
#include "packs/model.hpp"

using namespace packs;

namespace {

// Independent scalar evaluation of the predator and prey rates.
double predator_rate(const ModelParams& p, const std::vector<double>& w, double u, std::size_t i) {
  double others = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j != i) others += w[j];
  }
  return (-p.omega + p.k * u - p.beta * others) * w[i];
}

double prey_rate(const ModelParams& p, const std::vector<double>& w, double u) {
  double total = 0.0;
  for (double x : w) total += x;
  return (p.lambda - p.mu * u - p.k * total) * u;
}

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_params examples") {
  const ModelParams p0;
  CHECK(validate_params(p0).ok());

  ModelParams low = p0;
  low.lambda = 0.4;
  const auto r = validate_params(low);
  CHECK_FALSE(r.ok());
  CHECK(mentions(r, "λk ≤ μω"));

  const auto zero = validate_params(p0.with_packs(0));
  CHECK(mentions(zero, "N ≥ 1"));

  CHECK(mentions(validate_params(p0.with_beta(-1.0)), "beta ≥ 0"));
  CHECK(mentions(validate_params(p0.with_packs(kMaxPacks + 1)), "N ≤"));
  ModelParams bad = p0;
  bad.d = 0.0;
  bad.mu = std::nan("");
  const auto many = validate_params(bad);
  CHECK(many.violations.size() >= 2);
  CHECK_THROWS_AS(require_valid(bad), std::invalid_argument);
}

TEST_CASE("reaction_terms examples") {
  const ModelParams p0;
  const std::vector<double> w{1.0 / 6.0, 1.0 / 6.0};
  for (double r : reaction_terms(p0, w, 2.0 / 3.0)) CHECK(std::abs(r) < 1e-15);

  for (double r : reaction_terms(p0.with_packs(4), std::vector<double>(4, 0.0), 0.0)) CHECK(r == 0.0);

  const auto r = reaction_terms(p0, std::vector<double>{1.0, 0.0}, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == 0.0);
  CHECK(r[2] == doctest::Approx(-1.0));
}

TEST_CASE("reaction_terms agrees with scalar oracle on random states") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dens(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const auto p = testing::random_params(rng, 12);
    std::vector<double> w(p.N);
    for (auto& x : w) x = dens(rng);
    const double u = dens(rng);
    const auto r = reaction_terms(p, w, u);
    REQUIRE(r.size() == p.N + 1);
    for (std::size_t i = 0; i < p.N; ++i) CHECK(r[i] == doctest::Approx(predator_rate(p, w, u, i)).epsilon(1e-12));
    CHECK(r[p.N] == doctest::Approx(prey_rate(p, w, u)).epsilon(1e-12));

    std::vector<double> packed = w;
    packed.push_back(u);
    std::vector<double> out(p.N + 1);
    reaction_terms(p, packed, out);
    CHECK(out == r);
  }
}

TEST_CASE("constant_coexistence_state examples") {
  const ModelParams p0;
  auto c = constant_coexistence_state(p0);
  CHECK(c.w == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(c.u == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.expand() == std::vector<double>{c.w, c.w, c.u});

  c = constant_coexistence_state(p0.with_packs(1));
  CHECK(c.w == doctest::Approx(0.5));
  CHECK(c.u == doctest::Approx(0.5));

  c = constant_coexistence_state(p0.with_beta(0.0).with_packs(3));
  CHECK(c.w == doctest::Approx(1.0 / 6.0));
  CHECK(c.u == doctest::Approx(0.5));
}

TEST_CASE("property: constant state zeroes the reaction terms") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto p = testing::random_params(rng, 200);
    const auto c = constant_coexistence_state(p);
    CHECK(c.w > 0.0);
    CHECK(c.u > 0.0);
    std::vector<double> out(p.N + 1);
    reaction_terms(p, c.expand(), out);
    for (double r : out) CHECK(std::abs(r) < 1e-12);

    // N w equals the aggregate N(lambda k - mu omega)/(mu beta (N-1) + N k^2).
    const double n = static_cast<double>(p.N);
    const double aggregate = n * (p.lambda * p.k - p.mu * p.omega) / (p.mu * p.beta * (n - 1.0) + n * p.k * p.k);
    CHECK(n * c.w == doctest::Approx(aggregate).epsilon(1e-13));
  }
}

TEST_CASE("mimura_states examples and residuals") {
  const ModelParams p0;
  auto s = mimura_states(p0, 0.0);
  CHECK(s[0].H == 0.0);
  CHECK(s[0].u == 0.0);
  CHECK(s[1].H == 0.0);
  CHECK(s[1].u == doctest::Approx(1.0));
  CHECK(s[2].H == doctest::Approx(0.5));
  CHECK(s[2].u == doctest::Approx(0.5));

  s = mimura_states(p0, 1.0);
  CHECK(s[2].H == doctest::Approx(0.25));
  CHECK(s[2].u == doctest::Approx(0.75));

  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto p = testing::random_params(rng);
    const double be = std::uniform_real_distribution<double>(0.0, 50.0)(rng);
    for (const auto& r : mimura_states(p, be)) {
      CHECK(std::abs((-p.omega + p.k * r.u - be * r.H) * r.H) < 1e-12);
      CHECK(std::abs((p.lambda - p.mu * r.u - p.k * r.H) * r.u) < 1e-12);
    }
    // With H = N w the pack system's predator equation reads
    // -omega + k u - beta (N - 1) / N H = 0, so that is the matching beta_eff.
    const auto c = constant_coexistence_state(p);
    const double n = static_cast<double>(p.N);
    const auto red = mimura_states(p, p.beta * (n - 1.0) / n)[2];
    CHECK(red.u == doctest::Approx(c.u).epsilon(1e-12));
    CHECK(red.H == doctest::Approx(n * c.w).epsilon(1e-12));
    if (p.N >= 2 && p.beta > 0.0) {
      CHECK(mimura_states(p, p.beta * (n - 1.0))[2].u != doctest::Approx(c.u).epsilon(1e-9));
    }
  }
}

TEST_CASE("total_population examples") {
  const ModelParams p0;
  auto pc = total_population(p0, 1.0);
  CHECK(pc.packs_total == doctest::Approx(1.0 / 3.0));
  CHECK(pc.single_total == doctest::Approx(0.5));
  CHECK(pc.ratio == doctest::Approx(2.0 / 3.0));

  for (std::size_t n : {1u, 2u, 7u, 100u}) CHECK(total_population(p0.with_beta(0.0).with_packs(n), 1.0).ratio == 1.0);

  pc = total_population(p0.with_packs(1), 2.0);
  CHECK(pc.single_total == doctest::Approx(1.0));
  CHECK(pc.ratio == 1.0);
}

TEST_CASE("property: ratio decreases strictly in beta for N >= 2") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    auto p = testing::random_params(rng);
    if (p.N < 2) p.N = 2;
    double prev = 1.0;
    for (double b : {0.001, 0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double r = total_population(p.with_beta(b), 1.0).ratio;
      CHECK(r < prev);
      prev = r;
    }
  }
}
