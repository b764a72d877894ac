#include "majorant/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "majorant/errors.hpp"
#include "majorant/parallel.hpp"

namespace majorant {
namespace {

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<Statistic> kStatistics[] = {
    {Statistic::DirichletNormP, "dirichlet_norm_p"},
    {Statistic::MajorantRatio, "majorant_ratio"},
    {Statistic::KpConstant, "kp_constant"},
    {Statistic::StarRatio, "star_ratio"},
};

constexpr Names<ModelFamily> kFamilies[] = {
    {ModelFamily::Bernoulli, "bernoulli"}, {ModelFamily::Doubling, "doubling"},
    {ModelFamily::PowerSelector, "power"}, {ModelFamily::PerturbedAp, "perturbed-ap"},
    {ModelFamily::Squares, "squares"},     {ModelFamily::Ap, "ap"},
};

template <class E, std::size_t K>
std::string name_of(const Names<E> (&table)[K], E value) {
  for (const auto& entry : table)
    if (entry.value == value) return entry.name;
  return "unknown";
}

template <class E, std::size_t K>
E parse_name(const Names<E> (&table)[K], const std::string& s, const char* what) {
  for (const auto& entry : table)
    if (s == entry.name) return entry.value;
  throw DomainError(std::string("unknown ") + what + " '" + s + "'");
}

std::int64_t ceil_power(std::int64_t base, double exponent) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(base), exponent) - 1e-9)));
}

// Selector density at ambient size n.
double selector_tau(const ExperimentConfig& c, std::int64_t n) {
  const double nn = static_cast<double>(n);
  return c.critical_density ? std::pow(nn, -1.0 + 2.0 / c.p) : std::pow(nn, -c.delta);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string to_string(Statistic s) { return name_of(kStatistics, s); }
std::string to_string(ModelFamily f) { return name_of(kFamilies, f); }
Statistic parse_statistic(const std::string& s) { return parse_name(kStatistics, s, "statistic"); }
ModelFamily parse_family(const std::string& s) { return parse_name(kFamilies, s, "model family"); }

// ---- configuration -------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw DomainError("size sweep is empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw DomainError("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw DomainError("sizes must be strictly increasing");
  }
  if (trials < 8) throw DomainError("at least 8 trials per size required");
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  if ((statistic == Statistic::MajorantRatio || statistic == Statistic::KpConstant) && p < 2.0)
    throw DomainError("extremal statistics require p >= 2");
  if (statistic == Statistic::StarRatio && !(p > 2.0)) throw DomainError("star ratio requires p > 2");
  if (!critical_density && (family == ModelFamily::Bernoulli || family == ModelFamily::Doubling ||
                            family == ModelFamily::PowerSelector) &&
      !(delta > 0.0 && delta < 1.0))
    throw DomainError("delta must lie in (0, 1)");
  if (family == ModelFamily::PerturbedAp && !(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
  if (spacing_factor < 3) throw DomainError("spacing factor must be at least 3");
  for (auto size : sizes) model_at(size).validate();
}

RandomSetModel ExperimentConfig::model_at(std::int64_t size) const {
  switch (family) {
    case ModelFamily::Bernoulli:
      return RandomSetModel{BernoulliModel{selector_tau(*this, size)}, size};
    case ModelFamily::Doubling: {
      const int k = std::max(1, static_cast<int>(std::lround(-std::log2(selector_tau(*this, size)))));
      return RandomSetModel{DoublingModel{k}, size};
    }
    case ModelFamily::PowerSelector:
      return RandomSetModel{PowerSelectorModel{power_exponent, selector_tau(*this, size)}, size};
    case ModelFamily::PerturbedAp: {
      const std::int64_t s = ceil_power(size, beta);
      const std::int64_t a = spacing_factor * s;
      return RandomSetModel{PerturbedApModel{s + 1, a, size, s}, a * size};
    }
    case ModelFamily::Squares:
      return RandomSetModel{SquaresModel{}, size};
    case ModelFamily::Ap:
      return RandomSetModel{ApModel{1, 1, size}, size};
  }
  throw DomainError("unknown model family");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{
      {"family", to_string(c.family)},
      {"statistic", to_string(c.statistic)},
      {"p", c.p},
      {"delta", c.delta},
      {"critical_density", c.critical_density},
      {"power_exponent", c.power_exponent},
      {"beta", c.beta},
      {"spacing_factor", c.spacing_factor},
      {"sizes", c.sizes},
      {"trials", c.trials},
      {"seed", {{"base", c.seed.base}, {"stream", c.seed.stream}}},
      {"oversample", c.oversample},
      {"ascent",
       {{"restarts", c.ascent.restarts},
        {"max_iter", c.ascent.max_iter},
        {"tol", c.ascent.tol},
        {"seed", {{"base", c.ascent.seed.base}, {"stream", c.ascent.seed.stream}}}}},
      {"min_fit_size", c.min_fit_size},
      {"max_excluded_fraction", c.max_excluded_fraction},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.family = parse_family(j.at("family").get<std::string>());
  c.statistic = parse_statistic(j.at("statistic").get<std::string>());
  c.p = j.at("p").get<double>();
  c.delta = j.value("delta", c.delta);
  c.critical_density = j.value("critical_density", c.critical_density);
  c.power_exponent = j.value("power_exponent", c.power_exponent);
  c.beta = j.value("beta", c.beta);
  c.spacing_factor = j.value("spacing_factor", c.spacing_factor);
  c.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
  c.trials = j.at("trials").get<std::int64_t>();
  c.seed.base = j.at("seed").at("base").get<std::uint64_t>();
  c.seed.stream = j.at("seed").at("stream").get<std::uint64_t>();
  c.oversample = j.value("oversample", c.oversample);
  if (j.contains("ascent")) {
    const auto& a = j.at("ascent");
    c.ascent.restarts = a.value("restarts", c.ascent.restarts);
    c.ascent.max_iter = a.value("max_iter", c.ascent.max_iter);
    c.ascent.tol = a.value("tol", c.ascent.tol);
    if (a.contains("seed")) {
      c.ascent.seed.base = a.at("seed").at("base").get<std::uint64_t>();
      c.ascent.seed.stream = a.at("seed").at("stream").get<std::uint64_t>();
    }
  }
  c.min_fit_size = j.value("min_fit_size", c.min_fit_size);
  c.max_excluded_fraction = j.value("max_excluded_fraction", c.max_excluded_fraction);
  return c;
}

// ---- predictions ---------------------------------------------------------------

double PredictedExponent::gap() const { return std::abs(first_term - second_term); }

PredictedExponent predicted_exponent_bernoulli(double p, double delta) {
  PredictedExponent e;
  e.first_term = p - 1.0 - p * delta;
  e.second_term = 0.5 * p * (1.0 - delta);
  e.exponent = std::max(e.first_term, e.second_term);
  e.crossover = 1.0 - 2.0 / p;
  return e;
}

PredictedExponent predicted_exponent_perturbed_ap(double p, double beta) {
  PredictedExponent e;
  e.first_term = p - 1.0 - beta;
  e.second_term = 0.5 * p;
  e.exponent = std::max(e.first_term, e.second_term);
  e.crossover = 0.5 * p - 1.0;
  return e;
}

std::optional<PredictedExponent> predicted_exponent(const ExperimentConfig& c) {
  if (c.statistic != Statistic::DirichletNormP) return std::nullopt;
  switch (c.family) {
    case ModelFamily::Bernoulli:
    case ModelFamily::Doubling:
    case ModelFamily::PowerSelector:
      return predicted_exponent_bernoulli(c.p, c.critical_density ? 1.0 - 2.0 / c.p : c.delta);
    case ModelFamily::PerturbedAp:
      return predicted_exponent_perturbed_ap(c.p, c.beta);
    default:
      return std::nullopt;
  }
}

// ---- fits ----------------------------------------------------------------------

PowerFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  PowerFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  fit.points = lx.size();
  if (lx.size() < 2) {
    fit.slope = fit.intercept = fit.residual_rms = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

TwoTermFit fit_two_term(std::span<const double> xs, std::span<const double> ys, double e1, double e2) {
  TwoTermFit fit;
  fit.attempted = true;
  fit.e1 = e1;
  fit.e2 = e2;
  // Minimize sum ((c1 u + c2 v) - 1)^2 with u = x^e1 / y, v = x^e2 / y.
  double uu = 0.0, uv = 0.0, vv = 0.0, u1 = 0.0, v1 = 0.0;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (!(ys[i] > 0.0)) continue;
    const double u = std::pow(xs[i], e1) / ys[i];
    const double v = std::pow(xs[i], e2) / ys[i];
    uu += u * u;
    uv += u * v;
    vv += v * v;
    u1 += u;
    v1 += v;
  }
  const double det = uu * vv - uv * uv;
  if (std::abs(det) <= 1e-300) return fit;
  fit.c1 = (u1 * vv - v1 * uv) / det;
  fit.c2 = (uu * v1 - uv * u1) / det;
  return fit;
}

// ---- experiments ---------------------------------------------------------------

std::optional<double> evaluate_statistic(const ExperimentConfig& c, const FrequencySet& set, const Seed& seed) {
  if (set.empty()) return std::nullopt;
  switch (c.statistic) {
    case Statistic::DirichletNormP:
      return dirichlet_power(set, c.p);
    case Statistic::MajorantRatio:
    case Statistic::KpConstant: {
      AscentParams params = c.ascent;
      params.seed = Seed{seed.derive(0), c.ascent.seed.base ^ c.ascent.seed.stream};
      params.threads = 1;
      GridSpec grid = GridSpec::for_ambient(set.ambient_size(), c.oversample);
      if (c.statistic == Statistic::MajorantRatio) return majorant_ratio(set, c.p, grid, params);
      return ascend(set, c.p, BallDomain::L2Ball, grid, params).best_norm;
    }
    case Statistic::StarRatio:
      if (set.size() < 2) return std::nullopt;
      return star_ratio(set, c.p);
  }
  return std::nullopt;
}

ScalingReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ScalingReport report;
  report.config = config;

  const std::size_t n_sizes = config.sizes.size();
  const auto n_trials = static_cast<std::size_t>(config.trials);
  const auto values = parallel_map(n_sizes * n_trials, resolve_threads(static_cast<int>(config.threads)),
                                   [&](std::size_t task) -> std::optional<double> {
                                     const std::size_t si = task / n_trials;
                                     const std::size_t t = task % n_trials;
                                     const Seed trial_seed{config.seed.child(si).derive(t), 0};
                                     const auto model = config.model_at(config.sizes[si]);
                                     const auto set = generate(model, trial_seed);
                                     return evaluate_statistic(config, set, trial_seed.child(1));
                                   });

  std::vector<double> fit_x, fit_y, all_x, all_y;
  for (std::size_t si = 0; si < n_sizes; ++si) {
    SizeStats st;
    st.size = config.sizes[si];
    st.ambient_size = config.model_at(st.size).ambient_size;
    st.trials = config.trials;
    std::vector<double> kept;
    for (std::size_t t = 0; t < n_trials; ++t) {
      const auto& v = values[si * n_trials + t];
      if (v) kept.push_back(*v);
      else ++st.excluded;
    }
    st.valid = !kept.empty() &&
               static_cast<double>(st.excluded) <= config.max_excluded_fraction * static_cast<double>(config.trials);
    if (!kept.empty()) {
      long double sum = 0.0L;
      for (double v : kept) sum += v;
      st.mean = static_cast<double>(sum / kept.size());
      long double ss = 0.0L;
      for (double v : kept) ss += (v - st.mean) * (v - st.mean);
      st.std = kept.size() > 1 ? static_cast<double>(std::sqrt(ss / (kept.size() - 1))) : 0.0;
      st.min = *std::min_element(kept.begin(), kept.end());
      st.max = *std::max_element(kept.begin(), kept.end());
    }
    if (st.valid) {
      all_x.push_back(static_cast<double>(st.size));
      all_y.push_back(st.mean);
      if (st.size >= config.min_fit_size) {
        fit_x.push_back(static_cast<double>(st.size));
        fit_y.push_back(st.mean);
      }
    }
    report.sizes.push_back(st);
  }
  if (fit_x.size() < 2) {
    fit_x = all_x;
    fit_y = all_y;
  }
  report.fit = fit_power_law(fit_x, fit_y);
  report.predicted = predicted_exponent(config);
  if (report.predicted && report.predicted->gap() < 0.25) {
    report.near_crossover = true;
    report.two_term = fit_two_term(fit_x, fit_y, report.predicted->first_term, report.predicted->second_term);
  }
  return report;
}

std::string report_csv(const ScalingReport& report) {
  std::ostringstream os;
  os << "size,stat_mean,stat_std,trials,excluded\n";
  for (const auto& s : report.sizes)
    os << s.size << ',' << format_double(s.mean) << ',' << format_double(s.std) << ',' << s.trials << ','
       << s.excluded << '\n';
  return os.str();
}

nlohmann::json report_json(const ScalingReport& report) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& s : report.sizes)
    sizes.push_back({{"size", s.size},
                     {"ambient_size", s.ambient_size},
                     {"mean", num(s.mean)},
                     {"std", num(s.std)},
                     {"min", num(s.min)},
                     {"max", num(s.max)},
                     {"trials", s.trials},
                     {"excluded", s.excluded},
                     {"valid", s.valid}});
  nlohmann::json j{
      {"fitted_slope", num(report.fit.slope)},
      {"intercept", num(report.fit.intercept)},
      {"residual_rms", num(report.fit.residual_rms)},
      {"fit_points", report.fit.points},
      {"predicted_exponent", report.predicted ? num(report.predicted->exponent) : nlohmann::json(nullptr)},
      {"near_crossover", report.near_crossover},
      {"config", to_json(report.config)},
      {"seed", {{"base", report.config.seed.base}, {"stream", report.config.seed.stream}}},
      {"sizes", sizes},
  };
  if (report.predicted)
    j["predicted_terms"] = {{"first", report.predicted->first_term},
                            {"second", report.predicted->second_term},
                            {"crossover", report.predicted->crossover}};
  if (report.two_term.attempted)
    j["two_term_fit"] = {{"e1", report.two_term.e1},
                         {"e2", report.two_term.e2},
                         {"c1", num(report.two_term.c1)},
                         {"c2", num(report.two_term.c2)},
                         {"positive", report.two_term.positive()}};
  return j;
}

// ---- structural quantities -----------------------------------------------------

double star_ratio(const FrequencySet& set, double p) {
  if (!(p > 2.0)) throw DomainError("star ratio requires p > 2");
  if (set.empty()) throw DomainError("star ratio undefined for an empty set");
  const double l2 = std::sqrt(static_cast<double>(set.size()));
  // ||D||_{2(p-1)}^{p-1} = (||D||_{2(p-1)}^{2(p-1)})^{1/2}
  const double high = std::sqrt(dirichlet_power(set, 2.0 * (p - 1.0)));
  return l2 * high / dirichlet_power(set, p);
}

BaselineBounds baseline_bounds(const FrequencySet& set, double p, double c) {
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  const double n = static_cast<double>(set.ambient_size());
  const double card = static_cast<double>(set.size());
  BaselineBounds b;
  b.hausdorff_young_ratio_bound = card > 0.0 ? c * std::pow(n / card, 1.0 / p) : std::numeric_limits<double>::infinity();
  b.trivial_lower_bound = card * std::pow(n, -1.0 / p);
  return b;
}

SquaresKink squares_kink(std::span<const double> p_grid, std::span<const std::int64_t> counts,
                         std::int64_t dual4_trials, const Seed& seed, unsigned threads) {
  for (double p : p_grid)
    if (!(p >= 2.0 && p <= 8.0)) throw DomainError("p must lie in [2, 8]");
  for (auto k : counts)
    if (k < 1 || k > 512) throw DomainError("number of squares must lie in [1, 512]");

  SquaresKink out;
  std::vector<double> xs(counts.begin(), counts.end());
  for (double p : p_grid) {
    SquaresKinkRow row;
    row.p = p;
    row.counts.assign(counts.begin(), counts.end());
    row.norms = parallel_map(counts.size(), threads, [&](std::size_t i) {
      return std::pow(dirichlet_power(gen_squares(counts[i] * counts[i]), p), 1.0 / p);
    });
    row.fit_in_count = fit_power_law(xs, row.norms);
    row.exponent_in_ambient = row.fit_in_count.slope / 2.0;
    out.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto squares = gen_squares(counts[i] * counts[i]);
    const GridSpec grid = GridSpec::for_ambient(squares.ambient_size());
    const auto ratios = parallel_map(static_cast<std::size_t>(dual4_trials), threads, [&](std::size_t t) {
      Rng rng = seed.child(static_cast<std::uint64_t>(i)).rng(t);
      std::vector<Complex> a(squares.size());
      for (auto& v : a) v = std::polar(std::sqrt(uniform01(rng)), 2.0 * std::numbers::pi * uniform01(rng));
      const CoefficientSeq coeffs(squares, std::move(a), BallDomain::LinfBall);
      return lp_norm(coeffs, 4.0, grid) / std::sqrt(coeffs.l2_norm_squared());
    });
    long double sum = 0.0L;
    for (double r : ratios) sum += r;
    out.dual4_mean_ratio.push_back(ratios.empty() ? 0.0 : static_cast<double>(sum / ratios.size()));
  }
  out.dual4_fit = fit_power_law(xs, out.dual4_mean_ratio);
  return out;
}

}  // namespace majorant
