#include "majorant/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "majorant/errors.hpp"
#include "majorant/expsum.hpp"
#include "majorant/parallel.hpp"

namespace majorant {

NormOracle::NormOracle(NormKind kind, std::size_t dimension, Evaluator eval, std::string name)
    : kind_(kind), dimension_(dimension), eval_(std::move(eval)), name_(std::move(name)) {}

NormOracle NormOracle::l1(std::size_t n) {
  return NormOracle(NormKind::L1, n, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }, "l1");
}

NormOracle NormOracle::linf(std::size_t n) {
  return NormOracle(NormKind::Linf, n, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
  }, "linf");
}

NormOracle NormOracle::euclidean(std::size_t n) {
  return NormOracle(NormKind::Euclidean, n, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }, "l2");
}

NormOracle NormOracle::trig_lq(double q, std::vector<std::int64_t> frequencies) {
  if (!(q >= 1.0)) throw DomainError("q must be at least 1");
  auto set = FrequencySet::from_unsorted(
      frequencies.empty() ? 1 : *std::max_element(frequencies.begin(), frequencies.end()), frequencies);
  if (set.size() != frequencies.size()) throw DomainError("frequencies must be distinct");
  const std::size_t n = set.size();
  GridSpec grid = GridSpec::for_ambient(set.ambient_size());
  grid.refine = false;
  // Coefficients follow the sorted frequency order.
  return NormOracle(NormKind::TrigLq, n, [set, grid, q](std::span<const double> x) {
    std::vector<Complex> a(x.begin(), x.end());
    return lp_norm(CoefficientSeq(set, std::move(a)), q, grid);
  }, "trig_l" + std::to_string(q));
}

NormOracle NormOracle::trig_lq(double q, std::size_t n) {
  std::vector<std::int64_t> freqs(n);
  std::iota(freqs.begin(), freqs.end(), 1);
  return trig_lq(q, std::move(freqs));
}

double NormOracle::operator()(std::span<const double> x) const {
  if (x.size() != dimension_) throw DomainError("vector dimension does not match the norm");
  return eval_(x);
}

double NormOracle::distance(std::span<const double> x, std::span<const double> y) const {
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
  return (*this)(d);
}

double levy_alpha(std::size_t n) {
  const double h = static_cast<double>(n) / 2.0;
  return std::exp(std::lgamma(h) - std::lgamma(h + 0.5)) / std::sqrt(2.0);
}

LevyMeanEstimate levy_mean(const NormOracle& oracle, std::int64_t samples, const Seed& seed, unsigned threads) {
  if (samples < 2) throw DomainError("need at least two samples");
  constexpr std::int64_t kBlock = 1024;
  const auto blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
  struct Moments {
    long double sum = 0.0L, sum2 = 0.0L;
  };
  const auto parts = parallel_map(blocks, threads, [&](std::size_t blk) {
    Moments m;
    Rng rng = seed.rng(blk);
    std::normal_distribution<double> gauss;
    std::vector<double> g(oracle.dimension());
    const std::int64_t begin = static_cast<std::int64_t>(blk) * kBlock;
    const std::int64_t end = std::min(samples, begin + kBlock);
    for (std::int64_t i = begin; i < end; ++i) {
      for (auto& v : g) v = gauss(rng);
      const long double norm = oracle(g);
      m.sum += norm;
      m.sum2 += norm * norm;
    }
    return m;
  });
  Moments total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum2 += p.sum2;
  }
  const auto count = static_cast<long double>(samples);
  const long double mean = total.sum / count;
  const long double var = std::max(0.0L, (total.sum2 - count * mean * mean) / (count - 1.0L));

  LevyMeanEstimate out;
  out.alpha_n = levy_alpha(oracle.dimension());
  out.samples = samples;
  out.mean = out.alpha_n * static_cast<double>(mean);
  out.std_error = out.alpha_n * static_cast<double>(std::sqrt(var / count));
  return out;
}

double dual_sudakov_rhs(double levy_mean, std::size_t n, double t, double c) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double r = levy_mean / t;
  return c * static_cast<double>(n) * r * r;
}

std::vector<std::size_t> greedy_packing(const PointCloud& points, const NormOracle& oracle, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool separated = true;
    for (auto c : chosen)
      if (oracle.distance(points[i], points[c]) < t) {
        separated = false;
        break;
      }
    if (separated) chosen.push_back(i);
  }
  return chosen;
}

PackingCover greedy_packing_cover(const PointCloud& points, const NormOracle& oracle, double t) {
  PackingCover out;
  out.packing = greedy_packing(points, oracle, t);
  out.packing_size = out.packing.size();

  // owners[i]: centers within distance < t of point i.
  std::vector<std::vector<std::size_t>> owners(points.size());
  for (std::size_t c = 0; c < out.packing.size(); ++c)
    for (std::size_t i = 0; i < points.size(); ++i)
      if (oracle.distance(points[i], points[out.packing[c]]) < t) owners[i].push_back(c);
  std::vector<std::size_t> coverage(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) coverage[i] = owners[i].size();
  std::vector<bool> kept(out.packing.size(), true);
  for (std::size_t c = out.packing.size(); c-- > 0;) {
    bool redundant = true;
    for (std::size_t i = 0; i < points.size() && redundant; ++i)
      if (coverage[i] == 1 && std::find(owners[i].begin(), owners[i].end(), c) != owners[i].end()) redundant = false;
    if (!redundant) continue;
    kept[c] = false;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (std::find(owners[i].begin(), owners[i].end(), c) != owners[i].end()) --coverage[i];
  }
  for (std::size_t c = 0; c < out.packing.size(); ++c)
    if (kept[c]) out.cover.push_back(out.packing[c]);
  out.greedy_cover_size = out.cover.size();
  return out;
}

bool is_cover(const PointCloud& points, std::span<const std::size_t> centers, const NormOracle& oracle, double t) {
  for (const auto& x : points) {
    bool covered = false;
    for (auto c : centers)
      if (oracle.distance(x, points[c]) < t) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

PointCloud sample_unit_ball(const NormOracle& oracle, std::size_t count, Rng& rng) {
  if (!oracle.ball_in_cube()) throw DomainError("unit ball is not contained in the cube");
  PointCloud out;
  out.reserve(count);
  std::vector<double> x(oracle.dimension());
  while (out.size() < count) {
    for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
    if (oracle(x) <= 1.0) out.push_back(x);
  }
  return out;
}

VolumeCheck volume_bound_check(const NormOracle& oracle, double t, std::int64_t samples, const Seed& seed) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("t must lie in (0, 1]");
  if (oracle.dimension() > 6) throw DomainError("volume check limited to n <= 6");
  Rng rng = seed.rng(0);
  const auto points = sample_unit_ball(oracle, static_cast<std::size_t>(samples), rng);
  VolumeCheck out;
  out.measured = greedy_packing(points, oracle, t).size();
  out.bound = std::pow(4.0 / t, static_cast<double>(oracle.dimension()));
  out.ok = static_cast<double>(out.measured) <= out.bound;
  return out;
}

}  // namespace majorant
