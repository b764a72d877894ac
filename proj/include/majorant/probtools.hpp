#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "majorant/expsum.hpp"
#include "majorant/rng.hpp"

namespace majorant {

/// Exceedance frequencies of |sum a_j eta_j| > lambda sigma, with
/// eta_j = xi_j - tau and sigma^2 = tau (1 - tau) sum |a_j|^2, next to the
/// bound 4 exp(-lambda^2 / 8). condition_ok[i] is max_j lambda |a_j| <= 4 sigma.
struct DeviationCheck {
  std::vector<double> lambda_grid;
  std::vector<double> exceed_freq;
  std::vector<double> bound;
  std::vector<bool> condition_ok;
  std::int64_t trials = 0;
  double sigma = 0.0;

  /// Binomial sampling slack 4 sqrt(b (1 - b) / trials) for bound b (capped at 1).
  double slack(std::size_t i) const;
  /// exceed_freq <= bound + slack at every lambda whose condition holds.
  bool consistent() const;
};

double large_deviation_bound(double lambda);

DeviationCheck ldt_empirical(std::span<const Complex> weights, double tau, std::span<const double> lambda_grid,
                             std::int64_t trials, const Seed& seed, unsigned threads = 1);

/// tau e^{(1-tau) x} + (1-tau) e^{-tau x}, the moment generating function of eta.
double mgf_lhs(double tau, double x);
/// exp(2 tau (1 - tau) x^2).
double mgf_rhs(double tau, double x);
/// lhs <= rhs up to a few ulps.
bool mgf_holds(double tau, double x);

struct MgfProbe {
  double tau = 0.0, x = 0.0, lhs = 0.0, rhs = 0.0;
  bool fails = false;
};

struct MgfCheck {
  std::size_t points_checked = 0;
  std::size_t grid_failures = 0;
  /// One probe at x = tau^{-1/2} per tau.
  std::vector<MgfProbe> probes;
  bool grid_holds() const { return grid_failures == 0; }
};

MgfCheck mgf_inequality_check(std::span<const double> tau_grid, std::span<const double> x_grid);

/// tau = 0.01, 0.02, ..., 0.99 and x = -1, -0.999, ..., 1.
std::vector<double> default_mgf_tau_grid();
std::vector<double> default_mgf_x_grid();

struct MomentCheck {
  double exact_moment = 0.0;
  double bound = 0.0;
  double log_exact = 0.0;
  double log_bound = 0.0;
  bool ok = false;
};

/// E[(sum_{j<=n} xi_j)^q] from the binomial law, summed in log space, against (q + e tau n)^q.
MomentCheck moment_bound_check(std::int64_t n, double tau, int q);

struct SalemCheck {
  bool conditions_ok = false;
  std::string diagnostic;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double sigma = 0.0;
  double threshold = 0.0;     ///< 20 sigma sqrt(log N)
  double probability_bound = 0.0;  ///< 4 N^-8
  double max_sup = 0.0;
  double mean_sup = 0.0;
};

/// Checks sup_n 10 |a_n|^2 log N <= sigma^2 and 10 <= tau (1 - tau) N log N.
bool salem_conditions(std::int64_t n, double tau, std::span<const Complex> weights, std::string* why = nullptr);

/// Counts trials whose sup over a 4N-point grid of |sum a_n eta_n e(n theta)|
/// exceeds 20 sigma sqrt(log N). Skipped (conditions_ok = false) when the
/// preconditions fail. weights[n-1] is a_n.
SalemCheck salem_zygmund_check(std::int64_t n, double tau, std::span<const Complex> weights, std::int64_t trials,
                               const Seed& seed, unsigned threads = 1);

/// Measured constants sup|T| / (sqrt(log(s + L)) sqrt(L)) for the centred
/// perturbed-progression polynomial T = D_S - E D_S.
struct CenteredApSup {
  std::int64_t trials = 0;
  double max_constant = 0.0;
  double mean_constant = 0.0;
};

CenteredApSup perturbed_ap_sup_constant(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length,
                                        std::int64_t s, std::int64_t trials, const Seed& seed);

/// Var(eta^2) / (tau (1 - tau)), which equals (1 - 2 tau)^2.
double centered_square_ratio(double tau);
double centered_square_ratio_empirical(double tau, std::int64_t samples, const Seed& seed);

}  // namespace majorant
