#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "majorant/expsum.hpp"
#include "majorant/rng.hpp"

namespace majorant {

struct AscentParams {
  int restarts = 8;
  int max_iter = 200;
  double tol = 1e-9;
  Seed seed{};
  unsigned threads = 1;
};

/// Objective sequence of one restart; entry 0 is the starting point.
struct AscentTrace {
  std::vector<double> objective;
  bool converged = false;
};

struct ExtremalResult {
  double best_norm = 0.0;
  CoefficientSeq best_coeffs;
  /// best_norm / Dirichlet norm for the l-infinity ball, best_norm for l2.
  double ratio = 0.0;
  int iterations_used = 0;
  int restarts = 0;
  bool converged = false;
  int best_restart = 0;
  std::vector<AscentTrace> traces;
};

/// b_n = (1/M) sum_m g |g|^(p-2) (theta_m) e(-n theta_m) for n in the support.
/// The directional derivative of (1/M) sum |g|^p along da is p Re sum da_n conj(b_n).
/// Throws DomainError for p < 2.
std::vector<Complex> linearization_coeffs(const CoefficientSeq& coeffs, double p, const GridSpec& grid);

/// The discretized objective (1/M) sum_m |g(theta_m)|^p on a fixed grid.
double grid_objective(const CoefficientSeq& coeffs, double p, const GridSpec& grid);

/// Convex maximization of ||sum a_n e(n.)||_p over the unit l-infinity or l2
/// ball of coefficients by repeated linear maximization (a <- b/|b|). The
/// objective never decreases along an iteration. Restart 0 starts from the
/// all-ones point (normalized for l2); the others from random phases.
/// Every norm is computed on the fixed grid `grid` (no refinement).
ExtremalResult ascend(const FrequencySet& support, double p, BallDomain domain, const GridSpec& grid,
                      const AscentParams& params = {});

/// sup over |a_n| <= 1 of the p-norm divided by the Dirichlet norm.
/// Throws DomainError on an empty set.
double majorant_ratio(const FrequencySet& set, double p, const GridSpec& grid, const AscentParams& params = {});

/// log(ratio) / log(N).
double gamma_estimate(double ratio, std::int64_t ambient_size);

struct SignSearchResult {
  double best_norm = 0.0;
  std::vector<Complex> coeffs;
  std::size_t patterns = 0;
};

/// Exhaustive search over coefficients drawn from `alphabet` (first
/// coefficient pinned to alphabet[0]; the objective is phase invariant).
/// Limited to alphabet.size()^(|A|-1) <= 2^26 patterns.
SignSearchResult pattern_search(const FrequencySet& support, double p, const GridSpec& grid,
                                const std::vector<Complex>& alphabet);

}  // namespace majorant
