#include "majorant/expsum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "majorant/errors.hpp"
#include "majorant/fft.hpp"

namespace majorant {

// ---- FrequencySet ----------------------------------------------------------

FrequencySet::FrequencySet(std::int64_t ambient_size, std::vector<std::int64_t> elems)
    : ambient_size_(ambient_size), elems_(std::move(elems)) {
  if (ambient_size_ < 1) throw DomainError("ambient size must be positive");
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    const auto n = elems_[i];
    if (n < 1 || n > ambient_size_)
      throw DomainError("frequency " + std::to_string(n) + " outside [1, " +
                        std::to_string(ambient_size_) + "]");
    if (i > 0 && elems_[i - 1] >= n) throw DomainError("frequencies must be strictly increasing");
  }
}

FrequencySet FrequencySet::from_unsorted(std::int64_t ambient_size, std::vector<std::int64_t> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return FrequencySet(ambient_size, std::move(elems));
}

FrequencySet FrequencySet::full(std::int64_t ambient_size) {
  std::vector<std::int64_t> elems(static_cast<std::size_t>(std::max<std::int64_t>(ambient_size, 0)));
  for (std::size_t i = 0; i < elems.size(); ++i) elems[i] = static_cast<std::int64_t>(i) + 1;
  return FrequencySet(ambient_size, std::move(elems));
}

bool FrequencySet::contains(std::int64_t n) const {
  return std::binary_search(elems_.begin(), elems_.end(), n);
}

// ---- CoefficientSeq --------------------------------------------------------

CoefficientSeq::CoefficientSeq(FrequencySet support, std::vector<Complex> values, BallDomain domain)
    : support_(std::move(support)), values_(std::move(values)), domain_(domain) {
  if (values_.size() != support_.size())
    throw DomainError("coefficient count does not match support size");
  switch (domain_) {
    case BallDomain::LinfBall:
      for (const auto& a : values_)
        if (std::abs(a) > 1.0 + kConstraintSlack) throw DomainError("coefficient outside the unit disk");
      break;
    case BallDomain::L2Ball:
      if (l2_norm_squared() > 1.0 + kConstraintSlack) throw DomainError("coefficients outside the unit l2 ball");
      break;
    case BallDomain::Unconstrained:
      break;
  }
}

CoefficientSeq CoefficientSeq::ones(const FrequencySet& support) {
  return CoefficientSeq(support, std::vector<Complex>(support.size(), Complex{1.0, 0.0}),
                        BallDomain::LinfBall);
}

bool CoefficientSeq::is_indicator() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& a) { return a == Complex{1.0, 0.0}; });
}

double CoefficientSeq::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& a : values_) s += std::norm(a);
  return s;
}

// ---- GridSpec --------------------------------------------------------------

GridSpec GridSpec::for_ambient(std::int64_t ambient_size, double oversample) {
  if (!(oversample >= kMinOversample)) throw SizingError("oversample must be at least 4");
  const double target = std::ceil(oversample * static_cast<double>(std::max<std::int64_t>(ambient_size, 1)));
  GridSpec g;
  g.points = fft::next_pow2(static_cast<std::size_t>(target));
  g.oversample = oversample;
  return g;
}

void GridSpec::validate_for(std::int64_t ambient_size) const {
  if (points == 0 || !std::has_single_bit(points)) throw SizingError("grid size must be a power of two");
  if (static_cast<double>(points) < kMinOversample * static_cast<double>(ambient_size))
    throw SizingError("grid of " + std::to_string(points) + " points is too small for ambient size " +
                      std::to_string(ambient_size));
}

// ---- Autocorrelation -------------------------------------------------------

Autocorrelation::Autocorrelation(std::int64_t max_lag, std::vector<Complex> values)
    : max_lag_(max_lag), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(2 * max_lag_ + 1))
    throw DomainError("autocorrelation size does not match its lag range");
}

Complex Autocorrelation::at(std::int64_t lag) const {
  if (lag < -max_lag_ || lag > max_lag_) return {};
  return values_[static_cast<std::size_t>(lag + max_lag_)];
}

// ---- evaluation and norms --------------------------------------------------

std::vector<Complex> evaluate_on_grid(const CoefficientSeq& coeffs, const GridSpec& grid) {
  grid.validate_for(coeffs.support().ambient_size());
  std::vector<Complex> buf(grid.points);
  const auto freqs = coeffs.support().elems();
  const auto vals = coeffs.values();
  for (std::size_t i = 0; i < freqs.size(); ++i) buf[static_cast<std::size_t>(freqs[i])] += vals[i];
  fft::synthesize(buf);
  return buf;
}

double mean_abs_power(std::span<const Complex> values, double p) {
  if (values.empty()) return 0.0;
  long double acc = 0.0L;
  if (p == 2.0) {
    for (const auto& v : values) acc += std::norm(v);
  } else if (is_even_integer(p)) {
    const int k = static_cast<int>(p / 2);
    for (const auto& v : values) {
      long double r = std::norm(v), t = 1.0L;
      for (int j = 0; j < k; ++j) t *= r;
      acc += t;
    }
  } else {
    for (const auto& v : values) acc += std::pow(static_cast<long double>(std::abs(v)), static_cast<long double>(p));
  }
  return static_cast<double>(acc / static_cast<long double>(values.size()));
}

bool is_even_integer(double p) {
  return p >= 2.0 && p == std::floor(p) && std::fmod(p, 2.0) == 0.0 && p < 1e6;
}

namespace {

void require_p(double p) {
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
}

}  // namespace

namespace {

// Mean of |f|^p on the grid, doubled along the ladder when requested.
double quadrature_power(const CoefficientSeq& coeffs, double p, const GridSpec& grid, std::size_t* points_used) {
  double value = mean_abs_power(evaluate_on_grid(coeffs, grid), p);
  GridSpec g = grid;
  if (grid.refine && !is_even_integer(p)) {
    while (g.points < GridSpec::kMaxPoints) {
      g.points *= 2;
      const double finer = mean_abs_power(evaluate_on_grid(coeffs, g), p);
      const double change = std::abs(finer - value) / std::max(std::abs(finer), std::numeric_limits<double>::min());
      value = finer;
      if (change < GridSpec::kLadderTol) break;
    }
  }
  if (points_used) *points_used = g.points;
  return value;
}

}  // namespace

double lp_norm(const CoefficientSeq& coeffs, double p, const GridSpec& grid) {
  require_p(p);
  if (coeffs.size() == 0) return 0.0;
  return std::pow(quadrature_power(coeffs, p, grid, nullptr), 1.0 / p);
}

NormEvaluation evaluate_norm(const CoefficientSeq& coeffs, double p, const GridSpec& grid) {
  require_p(p);
  NormEvaluation out;
  if (coeffs.size() == 0) {
    out.exact = true;
    return out;
  }
  if (is_even_integer(p) && p <= 64.0) {
    const int k = static_cast<int>(p / 2);
    if (!coeffs.is_indicator() || std::pow(static_cast<double>(coeffs.size()), k - 1) < 0x1.0p62) {
      out.value = lp_norm_even_exact(coeffs, k * 2);
      out.exact = true;
      return out;
    }
  }
  out.value = std::pow(quadrature_power(coeffs, p, grid, &out.grid_points), 1.0 / p);
  return out;
}

double lp_norm(const CoefficientSeq& coeffs, double p) {
  return lp_norm(coeffs, p, GridSpec::for_ambient(coeffs.support().ambient_size()));
}

double dirichlet_norm(const FrequencySet& set, double p, const GridSpec& grid) {
  return lp_norm(CoefficientSeq::ones(set), p, grid);
}

double dirichlet_norm(const FrequencySet& set, double p) {
  return dirichlet_norm(set, p, GridSpec::for_ambient(set.ambient_size()));
}

Autocorrelation autocorrelation(const CoefficientSeq& coeffs, AutocorrelationMethod method) {
  const std::int64_t max_lag = coeffs.support().ambient_size() - 1;
  std::vector<Complex> out(static_cast<std::size_t>(2 * max_lag + 1));
  const auto freqs = coeffs.support().elems();
  const auto vals = coeffs.values();
  const std::size_t k = freqs.size();

  if (method == AutocorrelationMethod::Auto) {
    const double pairs = static_cast<double>(k) * static_cast<double>(k);
    const double n = static_cast<double>(2 * max_lag + 2);
    method = pairs <= 8.0 * n * std::log2(n + 2.0) ? AutocorrelationMethod::Direct : AutocorrelationMethod::Fft;
  }

  if (method == AutocorrelationMethod::Direct) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out[static_cast<std::size_t>(freqs[i] - freqs[j] + max_lag)] += vals[i] * std::conj(vals[j]);
    return Autocorrelation(max_lag, std::move(out));
  }

  // |f|^2 has frequencies in [-max_lag, max_lag]; 2N points avoid aliasing.
  GridSpec grid;
  grid.points = fft::next_pow2(static_cast<std::size_t>(4 * (max_lag + 1)));
  auto g = evaluate_on_grid(coeffs, grid);
  for (auto& v : g) v = std::norm(v);
  fft::analyze(g);
  const auto m = static_cast<std::int64_t>(grid.points);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::int64_t lag = -max_lag; lag <= max_lag; ++lag)
    out[static_cast<std::size_t>(lag + max_lag)] = g[static_cast<std::size_t>(((lag % m) + m) % m)] * scale;
  return Autocorrelation(max_lag, std::move(out));
}

std::vector<std::int64_t> autocorrelation_counts(const FrequencySet& set) {
  const std::int64_t max_lag = set.ambient_size() - 1;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(2 * max_lag + 1), 0);
  const auto e = set.elems();
  for (auto n : e)
    for (auto m : e) ++counts[static_cast<std::size_t>(n - m + max_lag)];
  return counts;
}

unsigned __int128 even_moment_exact(const FrequencySet& set, int k) {
  if (k < 1) throw DomainError("convolution order must be positive");
  const auto e = set.elems();
  if (e.empty()) return 0;
  if (k == 1) return e.size();
  // c_k(n) <= |A|^(k-1); its square is accumulated in 128 bits.
  const double bound = std::pow(static_cast<double>(e.size()), k - 1);
  if (bound >= 0x1.0p62) throw DomainError("self-convolution counts overflow 64-bit integers");

  const std::int64_t lo = e.front();
  const std::int64_t span = e.back() - lo;
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(span) + 1, 0);
  for (auto n : e) cur[static_cast<std::size_t>(n - lo)] = 1;
  for (int order = 2; order <= k; ++order) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(order * span) + 1, 0);
    for (std::size_t x = 0; x < cur.size(); ++x) {
      const auto c = cur[x];
      if (c == 0) continue;
      for (auto n : e) next[x + static_cast<std::size_t>(n - lo)] += c;
    }
    cur = std::move(next);
  }
  unsigned __int128 total = 0;
  for (auto c : cur) total += static_cast<unsigned __int128>(c) * c;
  return total;
}

double lp_norm_even_exact(const CoefficientSeq& coeffs, int p) {
  if (p < 2 || p % 2 != 0) throw DomainError("exact norm requires an even integer p >= 2");
  const int k = p / 2;
  if (coeffs.size() == 0) return 0.0;
  if (coeffs.is_indicator()) {
    const auto moment = even_moment_exact(coeffs.support(), k);
    return static_cast<double>(std::pow(static_cast<long double>(moment), 1.0L / p));
  }
  const auto e = coeffs.support().elems();
  const auto vals = coeffs.values();
  const std::int64_t lo = e.front();
  const std::int64_t span = e.back() - lo;
  std::vector<Complex> cur(static_cast<std::size_t>(span) + 1);
  for (std::size_t i = 0; i < e.size(); ++i) cur[static_cast<std::size_t>(e[i] - lo)] = vals[i];
  for (int order = 2; order <= k; ++order) {
    std::vector<Complex> next(static_cast<std::size_t>(order * span) + 1);
    for (std::size_t x = 0; x < cur.size(); ++x) {
      const auto c = cur[x];
      if (c == Complex{}) continue;
      for (std::size_t i = 0; i < e.size(); ++i) next[x + static_cast<std::size_t>(e[i] - lo)] += c * vals[i];
    }
    cur = std::move(next);
  }
  long double total = 0.0L;
  for (const auto& c : cur) total += std::norm(c);
  return static_cast<double>(std::pow(total, 1.0L / p));
}

double dirichlet_power(const FrequencySet& set, double p) {
  if (set.empty()) return 0.0;
  if (is_even_integer(p)) {
    const int k = static_cast<int>(p / 2);
    if (std::pow(static_cast<double>(set.size()), k - 1) < 0x1.0p62)
      return static_cast<double>(static_cast<long double>(even_moment_exact(set, k)));
  }
  return std::pow(dirichlet_norm(set, p), p);
}

}  // namespace majorant
