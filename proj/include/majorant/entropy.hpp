#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "majorant/rng.hpp"

namespace majorant {

enum class NormKind { L1, Linf, Euclidean, TrigLq };

/// A (semi)norm on R^n given by an evaluator.
class NormOracle {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  NormOracle(NormKind kind, std::size_t dimension, Evaluator eval, std::string name);

  static NormOracle l1(std::size_t n);
  static NormOracle linf(std::size_t n);
  static NormOracle euclidean(std::size_t n);
  /// x -> ||sum_j x_j e(f_j .)||_{L^q(T)} over the given frequencies
  /// (default 1..n), by quadrature on a fixed 8x oversampled grid.
  static NormOracle trig_lq(double q, std::vector<std::int64_t> frequencies);
  static NormOracle trig_lq(double q, std::size_t n);

  double operator()(std::span<const double> x) const;
  double distance(std::span<const double> x, std::span<const double> y) const;

  NormKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::string& name() const noexcept { return name_; }
  /// Whether the unit ball sits inside [-1, 1]^n (so it can be sampled by rejection).
  bool ball_in_cube() const noexcept { return kind_ != NormKind::TrigLq; }

 private:
  NormKind kind_;
  std::size_t dimension_;
  Evaluator eval_;
  std::string name_;
};

struct LevyMeanEstimate {
  double mean = 0.0;       ///< alpha_n * E||g||
  double std_error = 0.0;
  std::int64_t samples = 0;
  double alpha_n = 0.0;
  /// E||g|| = mean / alpha_n.
  double gaussian_mean() const { return mean / alpha_n; }
};

/// Gamma(n/2) / (Gamma((n+1)/2) sqrt 2), through log-gamma.
double levy_alpha(std::size_t n);

LevyMeanEstimate levy_mean(const NormOracle& oracle, std::int64_t samples, const Seed& seed, unsigned threads = 1);

/// C n (M_X / t)^2. Throws DomainError for t <= 0.
double dual_sudakov_rhs(double levy_mean, std::size_t n, double t, double c);

using PointCloud = std::vector<std::vector<double>>;

struct PackingCover {
  std::size_t packing_size = 0;
  std::size_t greedy_cover_size = 0;
  std::vector<std::size_t> packing;  ///< indices of a maximal t-separated subset
  std::vector<std::size_t> cover;    ///< centers left after pruning redundant ones
};

/// Indices of a greedy maximal t-separated subset, in input order.
std::vector<std::size_t> greedy_packing(const PointCloud& points, const NormOracle& oracle, double t);

/// Greedy maximal t-separated subset (pairwise distances >= t). By
/// maximality every point lies at distance < t from a chosen center, so the
/// same centers cover; redundant centers are then pruned greedily.
PackingCover greedy_packing_cover(const PointCloud& points, const NormOracle& oracle, double t);

/// True if every point is at distance < t from some center.
bool is_cover(const PointCloud& points, std::span<const std::size_t> centers, const NormOracle& oracle, double t);

struct VolumeCheck {
  std::size_t measured = 0;
  double bound = 0.0;  ///< (4 / t)^n
  bool ok = false;
};

/// Greedy t-separated packing of `samples` random points of the unit ball,
/// compared with (4/t)^n. Requires a ball inside the cube, n <= 6, 0 < t <= 1.
VolumeCheck volume_bound_check(const NormOracle& oracle, double t, std::int64_t samples, const Seed& seed);

/// Uniform points in the unit ball of `oracle` by rejection from the cube.
PointCloud sample_unit_ball(const NormOracle& oracle, std::size_t count, Rng& rng);

}  // namespace majorant
