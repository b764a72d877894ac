#include "doctest.h"

#include <cmath>

#include "majorant/errors.hpp"
#include "majorant/extremal.hpp"
#include "majorant/setgen.hpp"
#include "oracles.hpp"

using namespace majorant;

namespace {

GridSpec fixed_grid(std::size_t points) {
  GridSpec g;
  g.points = points;
  g.refine = false;
  return g;
}

CoefficientSeq random_coeffs(const FrequencySet& s, Rng& rng) {
  std::vector<Complex> v(s.size());
  for (auto& z : v) z = Complex{2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
  return CoefficientSeq(s, v);
}

std::vector<std::int64_t> elems(const FrequencySet& s) { return {s.elems().begin(), s.elems().end()}; }

}  // namespace

TEST_CASE("linearization of a single frequency") {
  const FrequencySet s(8, {5});
  for (double p : {2.0, 3.0, 4.5}) {
    const auto b = linearization_coeffs(CoefficientSeq::ones(s), p, fixed_grid(64));
    REQUIRE(b.size() == 1);
    CHECK(b[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b[0].imag()) < 1e-12);
  }
}

TEST_CASE("at p = 2 the linearization returns the coefficients") {
  Rng rng = Seed{4, 0}.rng(0);
  const FrequencySet s(30, {1, 4, 9, 16, 25, 29});
  const auto c = random_coeffs(s, rng);
  const auto b = linearization_coeffs(c, 2.0, fixed_grid(256));
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(b[i] - c.values()[i]) < 1e-12);
  CHECK_THROWS_AS(linearization_coeffs(c, 1.9, fixed_grid(256)), DomainError);
}

TEST_CASE("linearization matches finite differences") {
  Rng rng = Seed{12, 0}.rng(0);
  const auto grid = fixed_grid(512);
  for (double p : {2.5, 3.0, 5.0}) {
    for (int t = 0; t < 5; ++t) {
      const RandomSetModel model{BernoulliModel{0.3}, 48};
      auto s = generate(model, Seed{12, 1}, static_cast<std::uint64_t>(t));
      if (s.size() > 16) s = FrequencySet(48, {s.elems().begin(), s.elems().begin() + 16});
      if (s.empty()) continue;
      const auto a = random_coeffs(s, rng);
      const auto da = random_coeffs(s, rng);
      const auto b = linearization_coeffs(a, p, grid);
      double predicted = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i) predicted += p * (da.values()[i] * std::conj(b[i])).real();

      const double h = 1e-6;
      auto shifted = [&](double sign) {
        std::vector<Complex> v(a.values().begin(), a.values().end());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * h * da.values()[i];
        return grid_objective(CoefficientSeq(s, v), p, grid);
      };
      const double fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
      CHECK(fd == doctest::Approx(predicted).epsilon(1e-5));
    }
  }
}

TEST_CASE("ascent traces are monotone and iterates stay feasible") {
  const RandomSetModel model{BernoulliModel{0.2}, 200};
  const auto s = generate(model, Seed{31, 0});
  for (auto domain : {BallDomain::LinfBall, BallDomain::L2Ball}) {
    AscentParams params;
    params.restarts = 6;
    params.seed = Seed{31, 1};
    const auto r = ascend(s, 3.0, domain, GridSpec::for_ambient(200), params);
    CHECK(r.traces.size() == 6);
    for (const auto& tr : r.traces) {
      REQUIRE(!tr.objective.empty());
      for (std::size_t i = 1; i < tr.objective.size(); ++i) CHECK(tr.objective[i] >= tr.objective[i - 1]);
    }
    const auto v = r.best_coeffs.values();
    if (domain == BallDomain::LinfBall) {
      for (auto z : v) CHECK(std::abs(z) <= 1.0 + CoefficientSeq::kConstraintSlack);
    } else {
      CHECK(r.best_coeffs.l2_norm_squared() <= 1.0 + CoefficientSeq::kConstraintSlack);
    }
  }
}

TEST_CASE("even exponents: the all-ones point is extremal") {
  AscentParams params;
  params.restarts = 6;
  for (const auto& s : {FrequencySet(13, {1, 2, 4}), FrequencySet(40, {1, 3, 7, 15, 31, 40}), gen_squares(400)}) {
    for (double p : {4.0, 6.0}) {
      const double r = majorant_ratio(s, p, GridSpec::for_ambient(s.ambient_size()), params);
      CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("majorant failure on {1, 2, 4} at p = 3") {
  const FrequencySet s(4, {1, 2, 4});
  const auto grid = fixed_grid(4096);
  // Best +-1 pattern is (1, 1, -1); value pinned by an independent dense evaluation.
  const auto signs = pattern_search(s, 3.0, grid, {Complex{1, 0}, Complex{-1, 0}});
  const double d = dirichlet_norm(s, 3.0, grid);
  CHECK(signs.best_norm / d == doctest::Approx(1.005987411).epsilon(1e-8));
  CHECK(signs.patterns == 4);

  AscentParams params;
  params.restarts = 16;
  params.seed = Seed{5, 0};
  const double r = majorant_ratio(s, 3.0, grid, params);
  CHECK(r > 1.0);
  CHECK(r >= 1.005987411 - 1e-9);
}

TEST_CASE("sign search agrees with direct evaluation") {
  const FrequencySet s(9, {1, 3, 4, 9});
  const std::vector<Complex> alphabet{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const auto res = pattern_search(s, 3.0, fixed_grid(256), alphabet);
  CHECK(res.patterns == 64);

  double best = 0.0;
  const auto f = elems(s);
  for (int code = 0; code < 64; ++code) {
    std::vector<oracle::cplx> a{alphabet[0]};
    int c = code;
    for (int i = 0; i < 3; ++i, c /= 4) a.push_back(alphabet[static_cast<std::size_t>(c % 4)]);
    best = std::max(best, std::cbrt(oracle::direct_power_mean(f, a, 3.0, 256)));
  }
  CHECK(res.best_norm == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("ascent is not beaten by the discrete sign search on small sets") {
  const std::vector<Complex> alphabet{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (std::uint64_t t = 0; t < 4; ++t) {
    const RandomSetModel model{BernoulliModel{0.35}, 24};
    auto s = generate(model, Seed{70, 0}, t);
    if (s.size() > 8) s = FrequencySet(24, {s.elems().begin(), s.elems().begin() + 8});
    if (s.size() < 2) continue;
    const auto grid = fixed_grid(512);
    const auto brute = pattern_search(s, 3.0, grid, alphabet);
    AscentParams params;
    params.restarts = 48;
    params.seed = Seed{70, t + 1};
    const auto asc = ascend(s, 3.0, BallDomain::LinfBall, grid, params);
    CHECK(brute.best_norm <= asc.best_norm * (1.0 + 1e-6));
  }
}

TEST_CASE("progressions at p = 3 have ratio one") {
  AscentParams params;
  params.restarts = 8;
  for (std::int64_t len : {4, 8, 12}) {
    const auto s = gen_ap(3 * len, 2, 3, len);
    GridSpec grid = GridSpec::for_ambient(s.ambient_size(), 256.0);
    grid.refine = false;
    const auto signs = pattern_search(s, 3.0, grid, {Complex{1, 0}, Complex{-1, 0}});
    const double d = dirichlet_norm(s, 3.0, grid);
    CHECK(signs.best_norm / d <= 1.0 + 1e-6);
    CHECK(majorant_ratio(s, 3.0, grid, params) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("l2 ball and degenerate supports") {
  AscentParams params;
  params.restarts = 3;
  const auto full = FrequencySet::full(32);
  const auto r = ascend(full, 2.0, BallDomain::L2Ball, GridSpec::for_ambient(32), params);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));

  const FrequencySet single(10, {7});
  for (double p : {2.0, 3.0, 7.5}) CHECK(majorant_ratio(single, p, GridSpec::for_ambient(10), params) ==
                                         doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(majorant_ratio(FrequencySet(10, {}), 3.0, GridSpec::for_ambient(10)), DomainError);
  CHECK_THROWS_AS(majorant_ratio(single, 1.5, GridSpec::for_ambient(10)), DomainError);
  CHECK(gamma_estimate(std::exp(0.5), static_cast<std::int64_t>(std::round(std::exp(2.0)))) ==
        doctest::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("ascent results do not depend on the thread count") {
  const auto s = generate(RandomSetModel{BernoulliModel{0.1}, 300}, Seed{2, 2});
  AscentParams params;
  params.restarts = 8;
  params.seed = Seed{2, 3};
  params.threads = 1;
  const auto a = ascend(s, 3.0, BallDomain::LinfBall, GridSpec::for_ambient(300), params);
  params.threads = 4;
  const auto b = ascend(s, 3.0, BallDomain::LinfBall, GridSpec::for_ambient(300), params);
  CHECK(a.best_norm == b.best_norm);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.traces.size() == b.traces.size());
}
