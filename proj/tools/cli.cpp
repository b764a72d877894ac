#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "majorant/entropy.hpp"
#include "majorant/errors.hpp"
#include "majorant/expsum.hpp"
#include "majorant/extremal.hpp"
#include "majorant/parallel.hpp"
#include "majorant/probtools.hpp"
#include "majorant/scaling.hpp"
#include "majorant/setgen.hpp"
#include "majorant/setio.hpp"

namespace majorant::cli {
namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kUsageError = 2;

struct Common {
  std::string seed = "0";
  int threads = 0;
  std::string format = "json";
  std::string out;
};

struct ModelOptions {
  std::string set_file;
  std::string model;
  std::int64_t n = 0;
  std::optional<double> tau;
  std::optional<double> delta;
  int k = 0;
  int exponent = 2;
  std::int64_t b = 0, a = 0, len = 0, s = 1;
  std::int64_t a1 = 1, len1 = 1, a2 = 0, len2 = 1;
  std::uint64_t trial = 0;
};

const std::vector<std::string> kModels = {"bernoulli", "doubling", "power", "perturbed-ap", "squares", "ap", "ap2d"};

Seed parse_seed(const std::string& text) {
  try {
    const auto colon = text.find(':');
    std::size_t used = 0;
    Seed seed;
    seed.base = std::stoull(text.substr(0, colon), &used);
    if (used != std::min(colon, text.size())) throw std::invalid_argument(text);
    if (colon != std::string::npos) {
      seed.stream = std::stoull(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument(text);
    }
    return seed;
  } catch (const std::logic_error&) {
    throw DomainError("seed must be <base> or <base>:<stream>, got '" + text + "'");
  }
}

/// "256,512,1024", "256:16384" (doubling) or "256:16384:4" (geometric factor).
std::vector<std::int64_t> parse_sizes(const std::string& text) {
  std::vector<std::int64_t> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::int64_t> parts;
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ':');) parts.push_back(std::stoll(item));
      if (parts.size() < 2 || parts.size() > 3) throw DomainError("size range must be lo:hi or lo:hi:factor");
      const std::int64_t factor = parts.size() == 3 ? parts[2] : 2;
      if (parts[0] < 1 || factor < 2) throw DomainError("size range needs lo >= 1 and factor >= 2");
      for (std::int64_t v = parts[0]; v <= parts[1]; v *= factor) out.push_back(v);
    } else {
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(std::stoll(item));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError("cannot parse sizes '" + text + "'");
  }
  if (out.empty()) throw DomainError("empty size list");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  try {
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(std::stod(item));
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse list '" + text + "'");
  }
  return out;
}

void add_model_options(CLI::App* cmd, ModelOptions& m, bool with_set_file) {
  if (with_set_file) cmd->add_option("--set", m.set_file, "Set file to read instead of generating one");
  cmd->add_option("--model", m.model, "Set model")->check(CLI::IsMember(kModels));
  cmd->add_option("--n", m.n, "Ambient size N");
  cmd->add_option("--tau", m.tau, "Selector density");
  cmd->add_option("--delta", m.delta, "Density exponent, tau = N^-delta");
  cmd->add_option("--k", m.k, "Doubling selector window (tau = 2^-k)");
  cmd->add_option("--exponent", m.exponent, "Power selector exponent");
  cmd->add_option("--b", m.b, "First element of the progression");
  cmd->add_option("--a", m.a, "Step of the progression");
  cmd->add_option("--len", m.len, "Length of the progression");
  cmd->add_option("--s", m.s, "Perturbation radius");
  cmd->add_option("--a1", m.a1, "Inner step (ap2d)");
  cmd->add_option("--len1", m.len1, "Inner length (ap2d)");
  cmd->add_option("--a2", m.a2, "Outer step (ap2d)");
  cmd->add_option("--len2", m.len2, "Outer length (ap2d)");
  cmd->add_option("--trial", m.trial, "Trial index within the seed");
}

double density(const ModelOptions& m) {
  if (m.tau) return *m.tau;
  if (m.delta) return std::pow(static_cast<double>(m.n), -*m.delta);
  throw DomainError("model '" + m.model + "' needs --tau or --delta");
}

RandomSetModel build_model(const ModelOptions& m) {
  if (m.model.empty()) throw DomainError("either --set or --model is required");
  if (m.n < 1) throw DomainError("--n must be positive");
  RandomSetModel model;
  model.ambient_size = m.n;
  if (m.model == "bernoulli") {
    model.variant = BernoulliModel{density(m)};
  } else if (m.model == "doubling") {
    const int k = m.k > 0 ? m.k : static_cast<int>(std::lround(-std::log2(density(m))));
    model.variant = DoublingModel{k};
  } else if (m.model == "power") {
    model.variant = PowerSelectorModel{m.exponent, density(m)};
  } else if (m.model == "perturbed-ap") {
    const std::int64_t a = m.a > 0 ? m.a : 4 * m.s;
    const std::int64_t b = m.b > 0 ? m.b : m.s + 1;
    const std::int64_t len = m.len > 0 ? m.len : m.n / a;
    model.variant = PerturbedApModel{b, a, len, m.s};
  } else if (m.model == "squares") {
    model.variant = SquaresModel{};
  } else if (m.model == "ap") {
    const std::int64_t a = m.a > 0 ? m.a : 1;
    const std::int64_t b = m.b > 0 ? m.b : 1;
    const std::int64_t len = m.len > 0 ? m.len : (m.n - b) / a + 1;
    model.variant = ApModel{b, a, len};
  } else {
    const std::int64_t b = m.b > 0 ? m.b : 1;
    const std::int64_t a2 = m.a2 > 0 ? m.a2 : m.a1 * m.len1 + 1;
    model.variant = Ap2dModel{b, m.a1, m.len1, a2, m.len2};
  }
  model.validate();
  return model;
}

SetFile load_set(const ModelOptions& m, const Seed& seed) {
  if (!m.set_file.empty()) return read_set_file(m.set_file);
  const auto model = build_model(m);
  SetFile file{generate(model, seed, m.trial), model.tag(), std::nullopt};
  if (model.is_random()) file.seed = seed;
  return file;
}

std::string seed_string(const Seed& s) { return std::to_string(s.base) + ":" + std::to_string(s.stream); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

/// Report output shared by the analysis subcommands.
class Emitter {
 public:
  Emitter(const CLI::App& root, const Common& common, std::ostream& out)
      : config_(resolved_config(root)), common_(common), out_(out) {}

  /// Root options plus those of the selected subcommand, as a file that
  /// `--config` accepts. Unset optional values are left out.
  static std::string resolved_config(const CLI::App& root) {
    std::ostringstream os;
    auto append = [&](const std::string& text, const std::string& prefix) {
      std::stringstream lines(text);
      for (std::string line; std::getline(lines, line);) {
        if (line.empty() || line.front() == '[' || line.ends_with("=\"\"")) continue;
        os << prefix << line << '\n';
      }
    };
    std::string top;
    {
      std::stringstream lines(root.config_to_str(true, false));
      for (std::string line; std::getline(lines, line);)
        if (line.find('.') == std::string::npos || line.find('.') > line.find('=')) top += line + "\n";
    }
    append(top, "");
    for (const auto* sub : root.get_subcommands()) append(sub->config_to_str(true, false), sub->get_name() + ".");
    return os.str();
  }

  void emit(const std::string& csv, json j) const {
    j["config_file"] = config_;
    std::ostringstream header;
    std::stringstream lines(config_);
    for (std::string line; std::getline(lines, line);) header << "# " << line << '\n';
    const std::string csv_text = header.str() + csv;
    const std::string json_text = j.dump(2) + "\n";
    const bool want_csv = common_.format != "json";
    const bool want_json = common_.format != "csv";
    if (common_.out.empty()) {
      if (want_csv) out_ << csv_text;
      if (want_json) out_ << json_text;
      return;
    }
    if (want_csv) write(path_for(".csv"), csv_text);
    if (want_json) write(path_for(".json"), json_text);
  }

 private:
  std::string path_for(const std::string& ext) const {
    const auto& o = common_.out;
    if (o.size() >= ext.size() && o.compare(o.size() - ext.size(), ext.size(), ext) == 0) return o;
    if (common_.format != "both") {
      for (const char* other : {".csv", ".json"}) {
        const std::string e = other;
        if (o.size() >= e.size() && o.compare(o.size() - e.size(), e.size(), e) == 0)
          return o.substr(0, o.size() - e.size()) + ext;
      }
    }
    return o + ext;
  }

  static void write(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
  }

  std::string config_;
  const Common& common_;
  std::ostream& out_;
};

// ---- gen ---------------------------------------------------------------------

int cmd_gen(const ModelOptions& m, const Common& common, std::ostream& out) {
  const auto file = load_set(m, parse_seed(common.seed));
  if (common.out.empty()) {
    write_set(out, file);
  } else {
    std::ofstream f(common.out);
    if (!f) throw std::runtime_error("cannot write " + common.out);
    write_set(f, file);
  }
  return kOk;
}

// ---- norm --------------------------------------------------------------------

struct GridOptions {
  std::size_t points = 0;
  double oversample = GridSpec::kDefaultOversample;
  bool no_refine = false;

  GridSpec resolve(std::int64_t ambient) const {
    GridSpec g = GridSpec::for_ambient(ambient, oversample);
    if (points > 0) g.points = points;
    g.refine = !no_refine;
    g.validate_for(ambient);
    return g;
  }
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--grid-points", g.points, "Quadrature points (power of two, >= 4N); 0 picks oversample * N");
  cmd->add_option("--oversample", g.oversample, "Grid oversampling factor")->check(CLI::Range(4.0, 1024.0));
  cmd->add_flag("--no-refine", g.no_refine, "Disable grid doubling for odd or fractional p");
}

int cmd_norm(const ModelOptions& m, double p, const GridOptions& g, const Common& common, const Emitter& emitter,
             std::ostream& err) {
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  const auto file = load_set(m, parse_seed(common.seed));
  const auto& set = file.set;
  const auto grid = g.resolve(set.ambient_size());
  const auto result = evaluate_norm(CoefficientSeq::ones(set), p, grid);
  const char* method = result.exact ? "exact" : "quadrature";

  err << "norm " << fmt(result.value) << " (method: " << method << ", grid: " << result.grid_points
      << ", |A| = " << set.size() << ", N = " << set.ambient_size() << ")\n";
  std::ostringstream csv;
  csv << "p,norm,method,grid_points,size,ambient_size\n"
      << fmt(p) << ',' << fmt(result.value) << ',' << method << ',' << result.grid_points << ',' << set.size() << ','
      << set.ambient_size() << '\n';
  json j{{"p", p},
         {"norm", result.value},
         {"method", method},
         {"grid_points", result.grid_points},
         {"size", set.size()},
         {"ambient_size", set.ambient_size()},
         {"model", file.model},
         {"seed", file.seed ? json(seed_string(*file.seed)) : json(nullptr)}};
  emitter.emit(csv.str(), j);
  return kOk;
}

// ---- extremal ----------------------------------------------------------------

struct ExtremalOptions {
  double p = 4.0;
  std::string ball = "linf";
  int restarts = 8;
  int max_iter = 200;
  double tol = 1e-9;
};

int cmd_extremal(const ModelOptions& m, const ExtremalOptions& x, const GridOptions& g, const Common& common,
                 const Emitter& emitter, std::ostream& err) {
  const Seed seed = parse_seed(common.seed);
  const auto file = load_set(m, seed);
  const auto& set = file.set;
  if (set.empty()) throw DomainError("extremal search needs a non-empty set");
  GridSpec grid = g.resolve(set.ambient_size());
  grid.refine = false;
  AscentParams params{x.restarts, x.max_iter, x.tol, seed.child(1), resolve_threads(common.threads)};
  const BallDomain domain = x.ball == "l2" ? BallDomain::L2Ball : BallDomain::LinfBall;
  const auto result = ascend(set, x.p, domain, grid, params);

  bool monotone = true;
  std::ostringstream csv;
  csv << "restart,iterations,final_objective,converged,monotone\n";
  for (std::size_t r = 0; r < result.traces.size(); ++r) {
    const auto& obj = result.traces[r].objective;
    bool mono = true;
    for (std::size_t i = 1; i < obj.size(); ++i) mono = mono && obj[i] >= obj[i - 1];
    monotone = monotone && mono;
    csv << r << ',' << obj.size() - 1 << ',' << fmt(obj.back()) << ',' << result.traces[r].converged << ',' << mono
        << '\n';
  }
  json invariants{{"objective_monotone", monotone}};
  bool ok = monotone;
  if (domain == BallDomain::LinfBall && is_even_integer(x.p)) {
    const bool unit = result.ratio >= 1.0 - 1e-9 && result.ratio <= 1.0 + 1e-8;
    invariants["even_p_ratio_is_one"] = unit;
    ok = ok && unit;
  }
  const double dirichlet = std::pow(grid_objective(CoefficientSeq::ones(set), x.p, grid), 1.0 / x.p);
  err << "ratio " << fmt(result.ratio) << " (best restart " << result.best_restart << ", "
      << (ok ? "invariants hold" : "INVARIANT FAILURE") << ")\n";

  json coeffs = json::array();
  if (set.size() <= 4096)
    for (const auto& c : result.best_coeffs.values()) coeffs.push_back({c.real(), c.imag()});
  json j{{"p", x.p},
         {"ball", x.ball},
         {"ratio", result.ratio},
         {"best_norm", result.best_norm},
         {"dirichlet_norm", dirichlet},
         {"gamma_estimate", num(gamma_estimate(result.ratio, set.ambient_size()))},
         {"best_restart", result.best_restart},
         {"iterations_used", result.iterations_used},
         {"converged", result.converged},
         {"grid_points", grid.points},
         {"size", set.size()},
         {"ambient_size", set.ambient_size()},
         {"seed", seed_string(seed)},
         {"invariants", invariants},
         {"best_coefficients", coeffs}};
  emitter.emit(csv.str(), j);
  return ok ? kOk : kInvariantFailure;
}

// ---- scaling -----------------------------------------------------------------

struct ScalingOptions {
  std::string family = "bernoulli";
  std::string statistic = "dirichlet_norm_p";
  double p = 4.0;
  double delta = 0.5;
  bool critical = false;
  double beta = 0.5;
  std::int64_t spacing = 4;
  int power_exponent = 2;
  std::string sizes = "256:4096";
  std::int64_t trials = 16;
  double oversample = GridSpec::kDefaultOversample;
  int restarts = 8;
  int max_iter = 200;
  double tol = 1e-9;
  std::int64_t min_fit_size = 256;
  double max_excluded = 0.05;
  double tolerance = 0.15;
  std::string replay;
};

ExperimentConfig scaling_config(const ScalingOptions& o, const Common& common) {
  ExperimentConfig c;
  if (!o.replay.empty()) {
    std::ifstream f(o.replay);
    if (!f) throw DomainError("cannot open " + o.replay);
    json j;
    try {
      f >> j;
      c = config_from_json(j.contains("config") ? j.at("config") : j);
    } catch (const json::exception& e) {
      throw DomainError(std::string("malformed replay file: ") + e.what());
    }
  } else {
    c.family = parse_family(o.family);
    c.statistic = parse_statistic(o.statistic);
    c.p = o.p;
    c.delta = o.delta;
    c.critical_density = o.critical;
    c.beta = o.beta;
    c.spacing_factor = o.spacing;
    c.power_exponent = o.power_exponent;
    c.sizes = parse_sizes(o.sizes);
    c.trials = o.trials;
    c.seed = parse_seed(common.seed);
    c.oversample = o.oversample;
    c.ascent.restarts = o.restarts;
    c.ascent.max_iter = o.max_iter;
    c.ascent.tol = o.tol;
    c.ascent.seed = c.seed.child(1);
    c.min_fit_size = o.min_fit_size;
    c.max_excluded_fraction = o.max_excluded;
  }
  c.threads = resolve_threads(common.threads);
  return c;
}

int cmd_scaling(const ScalingOptions& o, const Common& common, const Emitter& emitter, std::ostream& err) {
  const auto config = scaling_config(o, common);
  const auto report = run_experiment(config);

  json invariants = json::object();
  bool ok = std::isfinite(report.fit.slope);
  invariants["slope_finite"] = ok;
  bool all_valid = true;
  for (const auto& s : report.sizes) all_valid = all_valid && s.valid;
  invariants["sizes_valid"] = all_valid;
  ok = ok && all_valid;
  if (report.predicted) {
    if (report.near_crossover) {
      invariants["two_term_positive"] = report.two_term.positive();
      ok = ok && report.two_term.positive();
    } else {
      const bool close = std::abs(report.fit.slope - report.predicted->exponent) <= o.tolerance;
      invariants["slope_matches_prediction"] = close;
      ok = ok && close;
    }
  }
  if (config.statistic == Statistic::MajorantRatio && is_even_integer(config.p)) {
    bool unit = true;
    for (const auto& s : report.sizes) unit = unit && (s.mean >= 1.0 - 1e-9 && s.mean <= 1.0 + 1e-8);
    invariants["even_p_ratio_is_one"] = unit;
    ok = ok && unit;
  }

  err << "slope " << fmt(report.fit.slope);
  if (report.predicted) err << " (predicted " << fmt(report.predicted->exponent) << ")";
  err << (ok ? "" : " INVARIANT FAILURE") << '\n';
  json j = report_json(report);
  j["invariants"] = invariants;
  j["tolerance"] = o.tolerance;
  emitter.emit(report_csv(report), j);
  return ok ? kOk : kInvariantFailure;
}

// ---- probcheck ---------------------------------------------------------------

struct ProbOptions {
  std::string check = "mgf";
  std::optional<double> tau;
  std::int64_t n = 0;
  int q = 10;
  std::int64_t trials = 0;
  std::string lambdas = "0.5,1,1.5,2,2.5,3,3.5,4,4.5,5,5.5,6";
  std::string weights = "ones";
};

std::vector<Complex> make_weights(const std::string& kind, std::int64_t n, const Seed& seed) {
  std::vector<Complex> w(static_cast<std::size_t>(n), Complex{1.0, 0.0});
  if (kind == "random") {
    Rng rng = seed.rng(0);
    for (auto& v : w) v = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
  }
  return w;
}

int cmd_probcheck(const ProbOptions& o, const Common& common, const Emitter& emitter, std::ostream& err) {
  const Seed seed = parse_seed(common.seed);
  const unsigned threads = resolve_threads(common.threads);
  std::ostringstream csv;
  json j{{"check", o.check}, {"seed", seed_string(seed)}};
  bool ok = true;

  if (o.check == "mgf") {
    const auto taus = o.tau ? std::vector<double>{*o.tau} : default_mgf_tau_grid();
    const auto check = mgf_inequality_check(taus, default_mgf_x_grid());
    csv << "tau,probe_x,probe_lhs,probe_rhs,probe_fails\n";
    json probes = json::array();
    for (const auto& pr : check.probes) {
      csv << fmt(pr.tau) << ',' << fmt(pr.x) << ',' << fmt(pr.lhs) << ',' << fmt(pr.rhs) << ',' << pr.fails << '\n';
      probes.push_back({{"tau", pr.tau}, {"x", pr.x}, {"lhs", pr.lhs}, {"rhs", pr.rhs}, {"fails", pr.fails}});
    }
    ok = check.grid_holds();
    j["points_checked"] = check.points_checked;
    j["grid_failures"] = check.grid_failures;
    j["probes"] = probes;
    j["invariants"] = {{"grid_holds", ok}};
    err << "mgf grid: " << check.grid_failures << " failures in " << check.points_checked << " points\n";
    for (const auto& pr : check.probes)
      if (check.probes.size() == 1)
        err << "probe x = " << fmt(pr.x) << ": " << (pr.fails ? "inequality fails" : "inequality holds") << '\n';
  } else if (o.check == "moment") {
    const std::int64_t n_max = o.n > 0 ? o.n : 100;
    const auto taus = o.tau ? std::vector<double>{*o.tau} : std::vector<double>{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9};
    csv << "n,tau,q,log_exact,log_bound,ok\n";
    std::int64_t failures = 0, checked = 0;
    for (double tau : taus)
      for (std::int64_t n = 1; n <= n_max; ++n)
        for (int q = 1; q <= o.q; ++q) {
          const auto m = moment_bound_check(n, tau, q);
          ++checked;
          if (!m.ok) ++failures;
          csv << n << ',' << fmt(tau) << ',' << q << ',' << fmt(m.log_exact) << ',' << fmt(m.log_bound) << ','
              << m.ok << '\n';
        }
    ok = failures == 0;
    j["checked"] = checked;
    j["failures"] = failures;
    j["invariants"] = {{"moment_bound_holds", ok}};
    err << "moment bound: " << failures << " failures in " << checked << " cases\n";
  } else if (o.check == "ldt") {
    const std::int64_t n = o.n > 0 ? o.n : 1000;
    const double tau = o.tau.value_or(0.1);
    const auto weights = make_weights(o.weights, n, seed.child(7));
    const auto lambdas = parse_doubles(o.lambdas);
    const auto check = ldt_empirical(weights, tau, lambdas, o.trials > 0 ? o.trials : 100000, seed, threads);
    csv << "lambda,exceed_freq,bound,slack,condition_ok\n";
    json rows = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      csv << fmt(lambdas[i]) << ',' << fmt(check.exceed_freq[i]) << ',' << fmt(check.bound[i]) << ','
          << fmt(check.slack(i)) << ',' << check.condition_ok[i] << '\n';
      rows.push_back({{"lambda", lambdas[i]},
                      {"exceed_freq", check.exceed_freq[i]},
                      {"bound", check.bound[i]},
                      {"condition_ok", static_cast<bool>(check.condition_ok[i])}});
    }
    ok = check.consistent();
    j["sigma"] = check.sigma;
    j["trials"] = check.trials;
    j["rows"] = rows;
    j["invariants"] = {{"within_bound", ok}};
    err << "large deviations: " << (ok ? "consistent with the bound" : "bound exceeded") << '\n';
  } else if (o.check == "salem") {
    const std::int64_t n = o.n > 0 ? o.n : 4096;
    const double tau = o.tau.value_or(0.1);
    const auto weights = make_weights(o.weights, n, seed.child(7));
    const auto check = salem_zygmund_check(n, tau, weights, o.trials > 0 ? o.trials : 1000, seed, threads);
    csv << "n,tau,trials,violations,threshold,max_sup,mean_sup,conditions_ok\n"
        << n << ',' << fmt(tau) << ',' << check.trials << ',' << check.violations << ',' << fmt(check.threshold) << ','
        << fmt(check.max_sup) << ',' << fmt(check.mean_sup) << ',' << check.conditions_ok << '\n';
    ok = check.violations == 0;
    j["conditions_ok"] = check.conditions_ok;
    j["diagnostic"] = check.diagnostic;
    j["trials"] = check.trials;
    j["violations"] = check.violations;
    j["sigma"] = check.sigma;
    j["threshold"] = check.threshold;
    j["probability_bound"] = check.probability_bound;
    j["max_sup"] = check.max_sup;
    j["mean_sup"] = check.mean_sup;
    j["invariants"] = {{"no_violations", ok}};
    if (!check.conditions_ok) err << "salem-zygmund: skipped (" << check.diagnostic << ")\n";
    else err << "salem-zygmund: " << check.violations << " violations in " << check.trials << " trials\n";
  } else {
    throw DomainError("unknown check '" + o.check + "'");
  }
  emitter.emit(csv.str(), j);
  return ok ? kOk : kInvariantFailure;
}

// ---- entropy -----------------------------------------------------------------

struct EntropyOptions {
  std::string check = "levy";
  std::string norm = "l1";
  std::size_t n = 10;
  double q = 4.0;
  std::int64_t samples = 20000;
  double t = 0.5;
  std::size_t points = 300;
  int instances = 20;
};

NormOracle make_oracle(const EntropyOptions& o) {
  if (o.norm == "l1") return NormOracle::l1(o.n);
  if (o.norm == "linf") return NormOracle::linf(o.n);
  if (o.norm == "l2") return NormOracle::euclidean(o.n);
  return NormOracle::trig_lq(o.q, o.n);
}

int cmd_entropy(const EntropyOptions& o, const Common& common, const Emitter& emitter, std::ostream& err) {
  const Seed seed = parse_seed(common.seed);
  const auto oracle = make_oracle(o);
  std::ostringstream csv;
  json j{{"check", o.check}, {"norm", oracle.name()}, {"n", o.n}, {"seed", seed_string(seed)}};
  bool ok = true;

  if (o.check == "levy") {
    const auto est = levy_mean(oracle, o.samples, seed, resolve_threads(common.threads));
    std::optional<double> exact;
    if (o.norm == "l1") exact = est.alpha_n * static_cast<double>(o.n) * std::sqrt(2.0 / std::numbers::pi);
    if (o.norm == "l2") exact = 1.0;
    csv << "n,levy_mean,std_error,alpha_n,reference,dual_sudakov_rhs\n"
        << o.n << ',' << fmt(est.mean) << ',' << fmt(est.std_error) << ',' << fmt(est.alpha_n) << ','
        << (exact ? fmt(*exact) : "") << ',' << fmt(dual_sudakov_rhs(est.mean, o.n, o.t, 1.0)) << '\n';
    j["levy_mean"] = est.mean;
    j["std_error"] = est.std_error;
    j["alpha_n"] = est.alpha_n;
    j["samples"] = est.samples;
    j["dual_sudakov_rhs"] = dual_sudakov_rhs(est.mean, o.n, o.t, 1.0);
    if (exact) {
      ok = std::abs(est.mean - *exact) <= 4.0 * est.std_error;
      j["reference"] = *exact;
      j["invariants"] = {{"matches_reference", ok}};
    }
    err << "levy mean " << fmt(est.mean) << " +- " << fmt(est.std_error) << '\n';
  } else if (o.check == "chain") {
    csv << "instance,packing_t,cover_t,packing_2t,covers\n";
    int failures = 0;
    for (int i = 0; i < o.instances; ++i) {
      Rng rng = seed.rng(static_cast<std::uint64_t>(i));
      const auto points = sample_unit_ball(oracle, o.points, rng);
      const auto pc = greedy_packing_cover(points, oracle, o.t);
      const auto wide = greedy_packing(points, oracle, 2.0 * o.t).size();
      const bool covers = is_cover(points, pc.cover, oracle, o.t);
      const bool holds = pc.packing_size >= pc.greedy_cover_size && pc.greedy_cover_size >= wide && covers;
      if (!holds) ++failures;
      csv << i << ',' << pc.packing_size << ',' << pc.greedy_cover_size << ',' << wide << ',' << covers << '\n';
    }
    ok = failures == 0;
    j["instances"] = o.instances;
    j["failures"] = failures;
    j["invariants"] = {{"chain_holds", ok}};
    err << "packing/cover chain: " << failures << " failures in " << o.instances << " instances\n";
  } else if (o.check == "volume") {
    const auto v = volume_bound_check(oracle, o.t, o.samples, seed);
    csv << "n,t,measured,bound\n" << o.n << ',' << fmt(o.t) << ',' << v.measured << ',' << fmt(v.bound) << '\n';
    ok = v.ok;
    j["measured"] = v.measured;
    j["bound"] = v.bound;
    j["invariants"] = {{"volume_bound_holds", ok}};
    err << "packing " << v.measured << " vs bound " << fmt(v.bound) << '\n';
  } else {
    throw DomainError("unknown check '" + o.check + "'");
  }
  emitter.emit(csv.str(), j);
  return ok ? kOk : kInvariantFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential sums, majorant ratios and scaling experiments", "majorantlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Key-value configuration file (command-line flags override it)");

  Common common;
  app.add_option("--seed", common.seed, "Seed as <base> or <base>:<stream>");
  app.add_option("--threads", common.threads, "Worker threads (results do not depend on it)")
      ->envname("MAJORANTLAB_THREADS")
      ->configurable(false);
  app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--out", common.out, "Output path (set file for gen, report prefix otherwise)")->configurable(false);

  ModelOptions model;
  GridOptions grid;

  auto* gen = app.add_subcommand("gen", "Generate a frequency set and write it in set-file format");
  add_model_options(gen, model, false);

  double norm_p = 2.0;
  auto* norm = app.add_subcommand("norm", "Lp norm of the Dirichlet kernel over a set");
  add_model_options(norm, model, true);
  norm->add_option("--p", norm_p, "Exponent p >= 1")->required();
  add_grid_options(norm, grid);

  ExtremalOptions ext;
  auto* extremal = app.add_subcommand("extremal", "Maximize the p-norm over unimodular or l2-bounded coefficients");
  add_model_options(extremal, model, true);
  extremal->add_option("--p", ext.p, "Exponent p >= 2");
  extremal->add_option("--ball", ext.ball, "Coefficient ball")->check(CLI::IsMember({"linf", "l2"}));
  extremal->add_option("--restarts", ext.restarts, "Number of restarts");
  extremal->add_option("--max-iter", ext.max_iter, "Iterations per restart");
  extremal->add_option("--tol", ext.tol, "Relative stopping tolerance");
  add_grid_options(extremal, grid);

  ScalingOptions sc;
  auto* scaling = app.add_subcommand("scaling", "Monte Carlo size sweep with a fitted exponent");
  scaling->add_option("--model", sc.family, "Set family")
      ->check(CLI::IsMember({"bernoulli", "doubling", "power", "perturbed-ap", "squares", "ap"}));
  scaling->add_option("--statistic", sc.statistic, "Statistic")
      ->check(CLI::IsMember({"dirichlet_norm_p", "majorant_ratio", "kp_constant", "star_ratio"}));
  scaling->add_option("--p", sc.p, "Exponent p");
  scaling->add_option("--delta", sc.delta, "Density exponent, tau = N^-delta");
  scaling->add_flag("--critical", sc.critical, "Use the critical density N^(-1+2/p)");
  scaling->add_option("--beta", sc.beta, "Perturbation exponent, s = ceil(L^beta)");
  scaling->add_option("--spacing", sc.spacing, "Progression step as a multiple of s");
  scaling->add_option("--power-exponent", sc.power_exponent, "Power selector exponent");
  scaling->add_option("--sizes", sc.sizes, "Sizes: list a,b,c or range lo:hi[:factor]");
  scaling->add_option("--trials", sc.trials, "Trials per size (>= 8)");
  scaling->add_option("--oversample", sc.oversample, "Grid oversampling for extremal statistics");
  scaling->add_option("--restarts", sc.restarts, "Ascent restarts for extremal statistics");
  scaling->add_option("--max-iter", sc.max_iter, "Ascent iterations per restart");
  scaling->add_option("--tol", sc.tol, "Ascent stopping tolerance");
  scaling->add_option("--min-fit-size", sc.min_fit_size, "Smallest size used in the fit");
  scaling->add_option("--max-excluded", sc.max_excluded, "Largest fraction of excluded draws per size");
  scaling->add_option("--tolerance", sc.tolerance, "Allowed |slope - predicted|");
  scaling->add_option("--replay", sc.replay, "Re-run the config block of a JSON report")->configurable(false);

  ProbOptions pr;
  auto* prob = app.add_subcommand("probcheck", "Checks of the probabilistic inequalities");
  prob->add_option("--check", pr.check, "Which check")->check(CLI::IsMember({"mgf", "moment", "ldt", "salem"}));
  prob->add_option("--tau", pr.tau, "Selector density (default: a grid for mgf and moment)");
  prob->add_option("--n", pr.n, "Number of selectors");
  prob->add_option("--q", pr.q, "Largest moment order");
  prob->add_option("--trials", pr.trials, "Monte Carlo trials");
  prob->add_option("--lambdas", pr.lambdas, "Comma-separated deviation levels");
  prob->add_option("--weights", pr.weights, "Coefficient weights")->check(CLI::IsMember({"ones", "random"}));

  EntropyOptions en;
  auto* entropy = app.add_subcommand("entropy", "Levy means, packings and covers");
  entropy->add_option("--check", en.check, "Which check")->check(CLI::IsMember({"levy", "chain", "volume"}));
  entropy->add_option("--norm", en.norm, "Norm")->check(CLI::IsMember({"l1", "linf", "l2", "trig"}));
  entropy->add_option("--n", en.n, "Dimension");
  entropy->add_option("--q", en.q, "Exponent of the trigonometric norm");
  entropy->add_option("--samples", en.samples, "Samples");
  entropy->add_option("--t", en.t, "Scale t");
  entropy->add_option("--points", en.points, "Points per instance (chain)");
  entropy->add_option("--instances", en.instances, "Random instances (chain)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    const Emitter emitter(app, common, out);
    if (*gen) return cmd_gen(model, common, out);
    if (*norm) return cmd_norm(model, norm_p, grid, common, emitter, err);
    if (*extremal) return cmd_extremal(model, ext, grid, common, emitter, err);
    if (*scaling) return cmd_scaling(sc, common, emitter, err);
    if (*prob) return cmd_probcheck(pr, common, emitter, err);
    if (*entropy) return cmd_entropy(en, common, emitter, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace majorant::cli
