#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace packs {

/// Finite point set in R^n with its diameter computed once, by brute force.
class PointCloud {
 public:
  /// Throws std::invalid_argument on an empty cloud, n < 1 or ragged points.
  PointCloud(std::size_t n, std::vector<std::vector<double>> points);

  std::size_t dim() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& point(std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  double diam() const { return diam_; }

  PointCloud scaled(double s) const;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> points_;
  double diam_ = 0.0;
};

/// Radius bound of a ball enclosing any set of diameter `diam` in R^n:
/// diam * sqrt(n / (2 (n + 1))). Throws std::invalid_argument when n < 1.
double jung_radius(std::size_t n, double diam);

/// Lower bound N (sqrt(2) r / (2 r + diam))^n on the largest number of open
/// radius-r balls centred in a set of diameter `diam` sharing a common point.
double covering_lower_bound(std::size_t count, double r, double diam, std::size_t n);

struct OverlapResult {
  std::size_t depth = 0;
  std::vector<double> witness;
};

/// Relative inflation of r used whenever depth is evaluated at a witness.
inline constexpr double kWitnessInflation = 1e-12;

/// #{i : |x - x_i| < r (1 + kWitnessInflation)}.
std::size_t depth_at(const PointCloud& cloud, double r, const std::vector<double>& x);

/// Largest number of open balls B_r(x_i) sharing a point.
/// n = 1: exact endpoint sweep. n = 2: exact angular sweep around every
/// circle (the deepest cell of the arrangement touches some circle).
/// n ≥ 3: depth at the centres plus `samples` uniform points in the
/// inflated bounding box, which can only underestimate.
OverlapResult max_overlap(const PointCloud& cloud, double r, std::size_t samples = 20000, std::uint64_t seed = 0);

}  // namespace packs
