#include "packs/covering.hpp"

#include <algorithm>
#include <compare>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace packs {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Events on a line or circle: closes sort before opens at equal coordinates
// because the balls are open.
struct Event {
  double at;
  int delta;
  auto operator<=>(const Event&) const = default;
};

OverlapResult sweep_1d(const PointCloud& cloud, double r) {
  std::vector<Event> ev;
  ev.reserve(2 * cloud.size());
  for (const auto& p : cloud.points()) {
    ev.push_back({p[0] - r, +1});
    ev.push_back({p[0] + r, -1});
  }
  std::ranges::sort(ev);
  OverlapResult best;
  int depth = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    depth += ev[i].delta;
    if (depth > static_cast<int>(best.depth) && i + 1 < ev.size()) {
      best.depth = static_cast<std::size_t>(depth);
      best.witness = {0.5 * (ev[i].at + ev[i + 1].at)};
    }
  }
  return best;
}

OverlapResult sweep_2d(const PointCloud& cloud, double r) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const std::size_t n = cloud.size();
  OverlapResult best;
  std::vector<Event> ev;
  for (std::size_t a = 0; a < n; ++a) {
    const auto& ca = cloud.point(a);
    ev.clear();
    int base = 1;  // points just inside circle a
    int wrapped = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const auto& cb = cloud.point(b);
      const double dx = cb[0] - ca[0];
      const double dy = cb[1] - ca[1];
      const double d = std::hypot(dx, dy);
      if (d <= 1e-15 * r) {
        ++base;
        continue;
      }
      if (d >= 2.0 * r) continue;
      // Points of circle a strictly inside disc b: cos(theta - phi) > d / 2r.
      const double half = std::acos(d / (2.0 * r));
      double start = std::atan2(dy, dx) - half;
      start -= two_pi * std::floor(start / two_pi);
      double end = start + 2.0 * half;
      if (end > two_pi) {
        ++wrapped;
        end -= two_pi;
      }
      ev.push_back({start, +1});
      ev.push_back({end, -1});
    }
    std::ranges::sort(ev);
    int depth = wrapped;
    auto consider = [&](double lo, double hi) {
      if (base + depth <= static_cast<int>(best.depth)) return;
      best.depth = static_cast<std::size_t>(base + depth);
      const double theta = 0.5 * (lo + hi);
      const double rho = r * (1.0 - 1e-9);
      best.witness = {ca[0] + rho * std::cos(theta), ca[1] + rho * std::sin(theta)};
    };
    consider(0.0, ev.empty() ? two_pi : ev.front().at);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      depth += ev[i].delta;
      consider(ev[i].at, i + 1 < ev.size() ? ev[i + 1].at : two_pi);
    }
  }
  return best;
}

OverlapResult sampled(const PointCloud& cloud, double r, std::size_t samples, std::uint64_t seed) {
  OverlapResult best;
  for (const auto& p : cloud.points()) {
    const std::size_t d = depth_at(cloud, r, p);
    if (d > best.depth) best = {d, p};
  }
  const std::size_t n = cloud.dim();
  std::vector<double> lo(n, INFINITY), hi(n, -INFINITY);
  for (const auto& p : cloud.points()) {
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], p[k] - r);
      hi[k] = std::max(hi[k], p[k] + r);
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < n; ++k) x[k] = std::uniform_real_distribution<double>(lo[k], hi[k])(rng);
    const std::size_t d = depth_at(cloud, r, x);
    if (d > best.depth) best = {d, x};
  }
  return best;
}

}  // namespace

PointCloud::PointCloud(std::size_t n, std::vector<std::vector<double>> points) : n_(n), points_(std::move(points)) {
  if (n_ < 1) throw std::invalid_argument("PointCloud: dimension must be ≥ 1");
  if (points_.empty()) throw std::invalid_argument("PointCloud: no points");
  for (const auto& p : points_) {
    if (p.size() != n_) throw std::invalid_argument("PointCloud: point has wrong dimension");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) diam_ = std::max(diam_, distance(points_[i], points_[j]));
  }
}

PointCloud PointCloud::scaled(double s) const {
  auto pts = points_;
  for (auto& p : pts) {
    for (auto& x : p) x *= s;
  }
  return PointCloud(n_, std::move(pts));
}

double jung_radius(std::size_t n, double diam) {
  if (n < 1) throw std::invalid_argument("jung_radius: dimension must be ≥ 1");
  if (!(diam >= 0.0)) throw std::invalid_argument("jung_radius: diameter must be ≥ 0");
  const double nd = static_cast<double>(n);
  return diam * std::sqrt(nd / (2.0 * (nd + 1.0)));
}

double covering_lower_bound(std::size_t count, double r, double diam, std::size_t n) {
  if (count < 1 || !(r > 0.0) || !(diam >= 0.0)) {
    throw std::invalid_argument("covering_lower_bound: need count ≥ 1, r > 0, diam ≥ 0");
  }
  const double ratio = std::numbers::sqrt2 * r / (2.0 * r + diam);
  return static_cast<double>(count) * std::pow(ratio, static_cast<double>(n));
}

std::size_t depth_at(const PointCloud& cloud, double r, const std::vector<double>& x) {
  const double reach = r * (1.0 + kWitnessInflation);
  std::size_t d = 0;
  for (const auto& p : cloud.points()) {
    if (distance(p, x) < reach) ++d;
  }
  return d;
}

OverlapResult max_overlap(const PointCloud& cloud, double r, std::size_t samples, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("max_overlap: radius must be > 0");
  switch (cloud.dim()) {
    case 1: return sweep_1d(cloud, r);
    case 2: return sweep_2d(cloud, r);
    default: return sampled(cloud, r, samples, seed);
  }
}

}  // namespace packs
