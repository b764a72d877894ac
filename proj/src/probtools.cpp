#include "majorant/probtools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "majorant/errors.hpp"
#include "majorant/fft.hpp"
#include "majorant/parallel.hpp"
#include "majorant/setgen.hpp"

namespace majorant {

// ---- large deviations -------------------------------------------------------

double large_deviation_bound(double lambda) { return 4.0 * std::exp(-lambda * lambda / 8.0); }

double DeviationCheck::slack(std::size_t i) const {
  const double b = std::min(bound[i], 1.0);
  return 4.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
}

bool DeviationCheck::consistent() const {
  for (std::size_t i = 0; i < lambda_grid.size(); ++i)
    if (condition_ok[i] && exceed_freq[i] > bound[i] + slack(i)) return false;
  return true;
}

DeviationCheck ldt_empirical(std::span<const Complex> weights, double tau, std::span<const double> lambda_grid,
                             std::int64_t trials, const Seed& seed, unsigned threads) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  if (trials < 1) throw DomainError("trials must be positive");
  DeviationCheck out;
  out.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  out.trials = trials;
  double sum2 = 0.0, max_abs = 0.0;
  for (const auto& a : weights) {
    sum2 += std::norm(a);
    max_abs = std::max(max_abs, std::abs(a));
  }
  out.sigma = std::sqrt(tau * (1.0 - tau) * sum2);
  for (double lambda : lambda_grid) {
    out.bound.push_back(large_deviation_bound(lambda));
    out.condition_ok.push_back(lambda * max_abs <= 4.0 * out.sigma);
  }

  // Trials are split into fixed blocks, each with its own stream.
  constexpr std::int64_t kBlock = 4096;
  const auto blocks = static_cast<std::size_t>((trials + kBlock - 1) / kBlock);
  const auto counts = parallel_map(blocks, threads, [&](std::size_t blk) {
    std::vector<std::int64_t> exceed(lambda_grid.size(), 0);
    Rng rng = seed.rng(blk);
    const std::int64_t begin = static_cast<std::int64_t>(blk) * kBlock;
    const std::int64_t end = std::min(trials, begin + kBlock);
    for (std::int64_t t = begin; t < end; ++t) {
      Complex sum{};
      for (const auto& a : weights) sum += a * ((uniform01(rng) < tau ? 1.0 : 0.0) - tau);
      const double mag = std::abs(sum);
      for (std::size_t i = 0; i < lambda_grid.size(); ++i)
        if (mag > lambda_grid[i] * out.sigma) ++exceed[i];
    }
    return exceed;
  });
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    std::int64_t total = 0;
    for (const auto& c : counts) total += c[i];
    out.exceed_freq.push_back(static_cast<double>(total) / static_cast<double>(trials));
  }
  return out;
}

// ---- moment generating function ---------------------------------------------

double mgf_lhs(double tau, double x) { return tau * std::exp((1.0 - tau) * x) + (1.0 - tau) * std::exp(-tau * x); }

double mgf_rhs(double tau, double x) { return std::exp(2.0 * tau * (1.0 - tau) * x * x); }

bool mgf_holds(double tau, double x) {
  const double rhs = mgf_rhs(tau, x);
  return mgf_lhs(tau, x) <= rhs * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
}

MgfCheck mgf_inequality_check(std::span<const double> tau_grid, std::span<const double> x_grid) {
  MgfCheck out;
  for (double tau : tau_grid) {
    for (double x : x_grid) {
      ++out.points_checked;
      if (!mgf_holds(tau, x)) ++out.grid_failures;
    }
    MgfProbe probe;
    probe.tau = tau;
    probe.x = 1.0 / std::sqrt(tau);
    probe.lhs = mgf_lhs(tau, probe.x);
    probe.rhs = mgf_rhs(tau, probe.x);
    probe.fails = !mgf_holds(tau, probe.x);
    out.probes.push_back(probe);
  }
  return out;
}

std::vector<double> default_mgf_tau_grid() {
  std::vector<double> taus;
  for (int i = 1; i <= 99; ++i) taus.push_back(i / 100.0);
  return taus;
}

std::vector<double> default_mgf_x_grid() {
  std::vector<double> xs;
  for (int i = -1000; i <= 1000; ++i) xs.push_back(i / 1000.0);
  return xs;
}

// ---- moments ------------------------------------------------------------------

MomentCheck moment_bound_check(std::int64_t n, double tau, int q) {
  if (n < 1) throw DomainError("n must be positive");
  if (q < 1) throw DomainError("q must be positive");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  using ld = long double;
  const ld log_tau = std::log(static_cast<ld>(tau));
  const ld log_1mtau = std::log1p(-static_cast<ld>(tau));
  const ld lg_n1 = std::lgamma(static_cast<ld>(n) + 1.0L);
  std::vector<ld> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (std::int64_t l = 1; l <= n; ++l) {
    const ld lb = lg_n1 - std::lgamma(static_cast<ld>(l) + 1.0L) - std::lgamma(static_cast<ld>(n - l) + 1.0L);
    terms.push_back(lb + q * std::log(static_cast<ld>(l)) + l * log_tau + (n - l) * log_1mtau);
  }
  const ld peak = *std::max_element(terms.begin(), terms.end());
  // Neumaier-compensated sum of exp(t - peak).
  ld sum = 0.0L, comp = 0.0L;
  for (ld t : terms) {
    const ld v = std::exp(t - peak);
    const ld s = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  MomentCheck out;
  const ld log_exact = peak + std::log(sum + comp);
  const ld log_bound = q * std::log(static_cast<ld>(q) + std::numbers::e_v<ld> * tau * static_cast<ld>(n));
  out.log_exact = static_cast<double>(log_exact);
  out.log_bound = static_cast<double>(log_bound);
  out.exact_moment = static_cast<double>(std::exp(log_exact));
  out.bound = static_cast<double>(std::exp(log_bound));
  out.ok = log_exact <= log_bound + 1e-12L * std::fabs(log_bound);
  return out;
}

// ---- Salem-Zygmund --------------------------------------------------------------

bool salem_conditions(std::int64_t n, double tau, std::span<const Complex> weights, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (n < 2) return fail("N must be at least 2");
  if (!(tau > 0.0 && tau < 1.0)) return fail("tau must lie in (0, 1)");
  const double log_n = std::log(static_cast<double>(n));
  double sum2 = 0.0, max2 = 0.0;
  for (const auto& a : weights) {
    sum2 += std::norm(a);
    max2 = std::max(max2, std::norm(a));
  }
  const double sigma2 = tau * (1.0 - tau) * sum2;
  if (10.0 * max2 * log_n > sigma2) return fail("10 max|a_n|^2 log N exceeds sigma^2");
  if (10.0 > tau * (1.0 - tau) * static_cast<double>(n) * log_n) return fail("tau (1 - tau) N log N is below 10");
  if (why) why->clear();
  return true;
}

SalemCheck salem_zygmund_check(std::int64_t n, double tau, std::span<const Complex> weights, std::int64_t trials,
                               const Seed& seed, unsigned threads) {
  if (weights.size() != static_cast<std::size_t>(n)) throw DomainError("one weight per frequency in [1, N] required");
  SalemCheck out;
  out.trials = trials;
  out.conditions_ok = salem_conditions(n, tau, weights, &out.diagnostic);
  double sum2 = 0.0;
  for (const auto& a : weights) sum2 += std::norm(a);
  out.sigma = std::sqrt(tau * (1.0 - tau) * sum2);
  out.threshold = 20.0 * out.sigma * std::sqrt(std::log(static_cast<double>(std::max<std::int64_t>(n, 2))));
  out.probability_bound = 4.0 * std::pow(static_cast<double>(n), -8.0);
  if (!out.conditions_ok) {
    out.trials = 0;
    return out;
  }
  const auto full = FrequencySet::full(n);
  GridSpec grid;
  grid.points = fft::next_pow2(static_cast<std::size_t>(4 * n));
  const auto sups = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Rng rng = seed.rng(t);
    std::vector<Complex> coeffs(weights.begin(), weights.end());
    for (auto& c : coeffs) c *= (uniform01(rng) < tau ? 1.0 : 0.0) - tau;
    const auto values = evaluate_on_grid(CoefficientSeq(full, std::move(coeffs)), grid);
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));
    return sup;
  });
  double total = 0.0;
  for (double s : sups) {
    total += s;
    out.max_sup = std::max(out.max_sup, s);
    if (s > out.threshold) ++out.violations;
  }
  out.mean_sup = sups.empty() ? 0.0 : total / static_cast<double>(sups.size());
  return out;
}

CenteredApSup perturbed_ap_sup_constant(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length,
                                        std::int64_t s, std::int64_t trials, const Seed& seed) {
  RandomSetModel{PerturbedApModel{b, a, length, s}, n}.validate();
  std::vector<std::int64_t> window;
  for (std::int64_t l = 0; l < length; ++l)
    for (std::int64_t d = -s; d <= s; ++d) window.push_back(b + a * l + d);
  const FrequencySet support(n, window);
  const double mean = 1.0 / static_cast<double>(2 * s + 1);
  GridSpec grid;
  grid.points = fft::next_pow2(static_cast<std::size_t>(4 * n));
  const double scale = std::sqrt(std::log(static_cast<double>(s + length))) * std::sqrt(static_cast<double>(length));

  CenteredApSup out;
  out.trials = trials;
  double total = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = seed.rng(static_cast<std::uint64_t>(t));
    const auto set = gen_perturbed_ap(n, b, a, length, s, rng);
    std::vector<Complex> coeffs(window.size(), Complex{-mean, 0.0});
    for (std::size_t i = 0; i < window.size(); ++i)
      if (set.contains(window[i])) coeffs[i] += 1.0;
    const auto values = evaluate_on_grid(CoefficientSeq(support, std::move(coeffs)), grid);
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));
    const double c = sup / scale;
    out.max_constant = std::max(out.max_constant, c);
    total += c;
  }
  out.mean_constant = trials > 0 ? total / static_cast<double>(trials) : 0.0;
  return out;
}

double centered_square_ratio(double tau) { return (1.0 - 2.0 * tau) * (1.0 - 2.0 * tau); }

double centered_square_ratio_empirical(double tau, std::int64_t samples, const Seed& seed) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  Rng rng = seed.rng(0);
  const double mean_sq = tau * (1.0 - tau);  // E eta^2
  long double acc = 0.0L;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double eta = (uniform01(rng) < tau ? 1.0 : 0.0) - tau;
    const double d = eta * eta - mean_sq;
    acc += d * d;
  }
  return static_cast<double>(acc / samples) / (tau * (1.0 - tau));
}

}  // namespace majorant
