#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "majorant/expsum.hpp"
#include "majorant/extremal.hpp"
#include "majorant/rng.hpp"
#include "majorant/setgen.hpp"

namespace majorant {

enum class Statistic { DirichletNormP, MajorantRatio, KpConstant, StarRatio };
enum class ModelFamily { Bernoulli, Doubling, PowerSelector, PerturbedAp, Squares, Ap };

std::string to_string(Statistic s);
std::string to_string(ModelFamily f);
Statistic parse_statistic(const std::string& s);
ModelFamily parse_family(const std::string& s);

/// A size sweep over one family of sets.
///
/// For the selector families the size is N and the density is
/// tau = N^-delta (or the critical density N^{-1+2/p}); doubling selectors
/// round to tau = 2^-k. For perturbed progressions the size is the length L,
/// with s = ceil(L^beta), a = spacing_factor * s, b = s + 1 and N = a L.
struct ExperimentConfig {
  ModelFamily family = ModelFamily::Bernoulli;
  Statistic statistic = Statistic::DirichletNormP;
  double p = 4.0;
  double delta = 0.5;
  bool critical_density = false;
  int power_exponent = 2;
  double beta = 0.5;
  std::int64_t spacing_factor = 4;
  std::vector<std::int64_t> sizes;
  std::int64_t trials = 16;
  Seed seed{};
  double oversample = GridSpec::kDefaultOversample;
  AscentParams ascent{};
  std::int64_t min_fit_size = 256;
  double max_excluded_fraction = 0.05;
  unsigned threads = 1;

  /// Throws DomainError on invalid settings (sizes not increasing, trials < 8, ...).
  void validate() const;
  /// The set law used at one size of the sweep.
  RandomSetModel model_at(std::int64_t size) const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Dominant exponent of E ||D_S||_p^p in the size parameter and the two
/// competing terms it is the maximum of.
struct PredictedExponent {
  double exponent = 0.0;
  double first_term = 0.0;   ///< p - 1 - p delta (resp. p - 1 - beta)
  double second_term = 0.0;  ///< (p/2)(1 - delta) (resp. p/2)
  double crossover = 0.0;    ///< delta* = 1 - 2/p (resp. beta* = p/2 - 1)
  double gap() const;
};

/// Selector law tau = N^-delta: max(p - 1 - p delta, (p/2)(1 - delta)).
PredictedExponent predicted_exponent_bernoulli(double p, double delta);
/// Perturbed progressions with s = L^beta: max(p/2, p - 1 - beta) in L.
PredictedExponent predicted_exponent_perturbed_ap(double p, double beta);
/// Prediction for the DirichletNormP statistic where one exists.
std::optional<PredictedExponent> predicted_exponent(const ExperimentConfig& config);

struct SizeStats {
  std::int64_t size = 0;
  std::int64_t ambient_size = 0;
  double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;
  std::int64_t trials = 0;
  std::int64_t excluded = 0;
  bool valid = true;
};

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::size_t points = 0;
};

/// y ~ c1 x^e1 + c2 x^e2 with fixed exponents, least squares on relative residuals.
struct TwoTermFit {
  bool attempted = false;
  double e1 = 0.0, e2 = 0.0, c1 = 0.0, c2 = 0.0;
  bool positive() const { return c1 > 0.0 && c2 > 0.0; }
};

struct ScalingReport {
  ExperimentConfig config;
  std::vector<SizeStats> sizes;
  PowerFit fit;
  std::optional<PredictedExponent> predicted;
  bool near_crossover = false;
  TwoTermFit two_term;
};

/// Unweighted least squares of log y against log x.
PowerFit fit_power_law(std::span<const double> xs, std::span<const double> ys);
TwoTermFit fit_two_term(std::span<const double> xs, std::span<const double> ys, double e1, double e2);

/// The statistic on one set; nullopt when undefined (empty set).
std::optional<double> evaluate_statistic(const ExperimentConfig& config, const FrequencySet& set, const Seed& seed);

ScalingReport run_experiment(const ExperimentConfig& config);

std::string report_csv(const ScalingReport& report);
nlohmann::json report_json(const ScalingReport& report);

/// ||D_A||_2 ||D_A||_{2(p-1)}^{p-1} / ||D_A||_p^p. Throws DomainError for p <= 2.
double star_ratio(const FrequencySet& set, double p);

struct BaselineBounds {
  double hausdorff_young_ratio_bound = 0.0;  ///< C (N/|A|)^{1/p}
  double trivial_lower_bound = 0.0;          ///< (|A|^p / N)^{1/p}
};
BaselineBounds baseline_bounds(const FrequencySet& set, double p, double c = 1.0);

struct SquaresKinkRow {
  double p = 0.0;
  std::vector<std::int64_t> counts;  ///< number of squares K = sqrt(N)
  std::vector<double> norms;
  PowerFit fit_in_count;             ///< slope in K
  double exponent_in_ambient = 0.0;  ///< slope in N = K^2
};

struct SquaresKink {
  std::vector<SquaresKinkRow> rows;
  std::vector<double> dual4_mean_ratio;  ///< ||sum a_n e(n^2 .)||_4 / |a|_2 per K
  PowerFit dual4_fit;                    ///< slope in K
};

/// Norms of sum_{n <= K} e(n^2 theta) across K, and the L^4 ratio with random
/// unit-disk coefficients. Requires p in [2, 8] and K <= 512.
SquaresKink squares_kink(std::span<const double> p_grid, std::span<const std::int64_t> counts,
                         std::int64_t dual4_trials, const Seed& seed, unsigned threads = 1);

}  // namespace majorant
