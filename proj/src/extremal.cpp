#include "majorant/extremal.hpp"

#include <cmath>
#include <numbers>

#include "majorant/errors.hpp"
#include "majorant/fft.hpp"
#include "majorant/parallel.hpp"

namespace majorant {
namespace {

constexpr double kPhaseTieThreshold = 1e-14;

// Objective and linearization from one evaluation of g.
struct Linearized {
  double objective = 0.0;
  std::vector<Complex> b;
};

Linearized linearize(const CoefficientSeq& coeffs, double p, const GridSpec& grid) {
  auto g = evaluate_on_grid(coeffs, grid);
  Linearized out;
  out.objective = mean_abs_power(g, p);
  if (p != 2.0) {
    for (auto& v : g) {
      const double r = std::abs(v);
      v = r == 0.0 ? Complex{} : v * std::pow(r, p - 2.0);
    }
  }
  fft::analyze(g);
  const double scale = 1.0 / static_cast<double>(grid.points);
  const auto freqs = coeffs.support().elems();
  out.b.resize(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) out.b[i] = g[static_cast<std::size_t>(freqs[i])] * scale;
  return out;
}

std::vector<Complex> starting_point(std::size_t size, BallDomain domain, int restart, const Seed& seed) {
  std::vector<Complex> a(size, Complex{1.0, 0.0});
  if (restart == 0) {
    if (domain == BallDomain::L2Ball && size > 0)
      for (auto& v : a) v /= std::sqrt(static_cast<double>(size));
    return a;
  }
  Rng rng = seed.rng(static_cast<std::uint64_t>(restart));
  if (domain == BallDomain::LinfBall) {
    for (auto& v : a) v = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
  } else {
    std::normal_distribution<double> gauss;
    double norm2 = 0.0;
    for (auto& v : a) {
      v = Complex{gauss(rng), gauss(rng)};
      norm2 += std::norm(v);
    }
    for (auto& v : a) v /= std::sqrt(norm2);
  }
  return a;
}

struct RestartOutcome {
  AscentTrace trace;
  std::vector<Complex> coeffs;
  int iterations = 0;
};

RestartOutcome run_restart(const FrequencySet& support, double p, BallDomain domain, const GridSpec& grid,
                           const AscentParams& params, int restart) {
  RestartOutcome out;
  out.coeffs = starting_point(support.size(), domain, restart, params.seed);
  auto lin = linearize(CoefficientSeq(support, out.coeffs), p, grid);
  out.trace.objective.push_back(lin.objective);
  for (int it = 0; it < params.max_iter; ++it) {
    std::vector<Complex> next = out.coeffs;
    if (domain == BallDomain::LinfBall) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        const double r = std::abs(lin.b[i]);
        if (r >= kPhaseTieThreshold) next[i] = lin.b[i] / r;
      }
    } else {
      double norm2 = 0.0;
      for (const auto& v : lin.b) norm2 += std::norm(v);
      if (std::sqrt(norm2) >= kPhaseTieThreshold)
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = lin.b[i] / std::sqrt(norm2);
    }
    auto next_lin = linearize(CoefficientSeq(support, next), p, grid);
    const double previous = lin.objective;
    // Convexity rules out a decrease; one here is rounding at the fixed point.
    if (next_lin.objective < previous) {
      out.trace.converged = true;
      break;
    }
    out.coeffs = std::move(next);
    lin = std::move(next_lin);
    out.trace.objective.push_back(lin.objective);
    out.iterations = it + 1;
    if (std::abs(lin.objective - previous) <= params.tol * std::abs(lin.objective)) {
      out.trace.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Complex> linearization_coeffs(const CoefficientSeq& coeffs, double p, const GridSpec& grid) {
  if (!(p >= 2.0)) throw DomainError("linearization requires p >= 2");
  return linearize(coeffs, p, grid).b;
}

double grid_objective(const CoefficientSeq& coeffs, double p, const GridSpec& grid) {
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  return mean_abs_power(evaluate_on_grid(coeffs, grid), p);
}

ExtremalResult ascend(const FrequencySet& support, double p, BallDomain domain, const GridSpec& grid,
                      const AscentParams& params) {
  if (!(p >= 2.0)) throw DomainError("ascent requires p >= 2");
  if (domain == BallDomain::Unconstrained) throw DomainError("ascent requires a bounded coefficient ball");
  if (params.restarts < 1) throw DomainError("at least one restart required");
  grid.validate_for(support.ambient_size());

  const auto outcomes = parallel_map(static_cast<std::size_t>(params.restarts), params.threads, [&](std::size_t r) {
    return run_restart(support, p, domain, grid, params, static_cast<int>(r));
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].trace.objective.back() > outcomes[best].trace.objective.back()) best = r;

  ExtremalResult result;
  const double best_objective = outcomes[best].trace.objective.back();
  result.best_norm = std::pow(best_objective, 1.0 / p);
  result.best_coeffs = CoefficientSeq(support, outcomes[best].coeffs, domain);
  result.iterations_used = outcomes[best].iterations;
  result.converged = outcomes[best].trace.converged;
  result.restarts = params.restarts;
  result.best_restart = static_cast<int>(best);
  if (domain == BallDomain::LinfBall) {
    const double ones = outcomes[0].trace.objective.front();
    result.ratio = ones > 0.0 ? std::pow(best_objective / ones, 1.0 / p) : 1.0;
  } else {
    result.ratio = result.best_norm;
  }
  for (const auto& o : outcomes) result.traces.push_back(o.trace);
  return result;
}

double majorant_ratio(const FrequencySet& set, double p, const GridSpec& grid, const AscentParams& params) {
  if (set.empty()) throw DomainError("majorant ratio undefined for an empty set");
  return ascend(set, p, BallDomain::LinfBall, grid, params).ratio;
}

double gamma_estimate(double ratio, std::int64_t ambient_size) {
  if (ambient_size < 2) return 0.0;
  return std::log(ratio) / std::log(static_cast<double>(ambient_size));
}

SignSearchResult pattern_search(const FrequencySet& support, double p, const GridSpec& grid,
                                const std::vector<Complex>& alphabet) {
  if (alphabet.empty()) throw DomainError("empty alphabet");
  const std::size_t k = support.size();
  SignSearchResult result;
  if (k == 0) return result;
  const double patterns = std::pow(static_cast<double>(alphabet.size()), static_cast<double>(k - 1));
  if (patterns > 0x1.0p26) throw DomainError("pattern search too large");
  result.patterns = static_cast<std::size_t>(patterns);

  std::vector<std::size_t> digits(k, 0);
  std::vector<Complex> a(k, alphabet[0]);
  double best = -1.0;
  for (std::size_t count = 0; count < result.patterns; ++count) {
    for (std::size_t i = 0; i < k; ++i) a[i] = alphabet[digits[i]];
    const double obj = grid_objective(CoefficientSeq(support, a), p, grid);
    if (obj > best) {
      best = obj;
      result.coeffs = a;
    }
    for (std::size_t i = 1; i < k; ++i) {
      if (++digits[i] < alphabet.size()) break;
      digits[i] = 0;
    }
  }
  result.best_norm = std::pow(best, 1.0 / p);
  return result;
}

}  // namespace majorant
