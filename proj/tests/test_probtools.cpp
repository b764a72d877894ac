#include "doctest.h"

#include <cmath>

#include "majorant/probtools.hpp"
#include "oracles.hpp"

using namespace majorant;

TEST_CASE("large deviation check on all-ones weights") {
  const std::vector<Complex> ones(1000, Complex{1.0, 0.0});
  const std::vector<double> lambdas{0.0, 1.0, 2.0, 4.0};
  const auto chk = ldt_empirical(ones, 0.3, lambdas, 20000, Seed{11, 0}, 4);
  CHECK(chk.sigma == doctest::Approx(std::sqrt(0.21 * 1000)));
  CHECK(chk.exceed_freq[0] <= 1.0);
  CHECK(chk.bound[3] == doctest::Approx(4.0 * std::exp(-2.0)));
  // The sum is close to Gaussian here: P(|Z| > 4) is about 6.3e-5.
  CHECK(chk.exceed_freq[3] < 1e-3);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CHECK(chk.exceed_freq[i] >= 0.0);
    CHECK(chk.exceed_freq[i] <= 1.0);
    if (i) CHECK(chk.bound[i] < chk.bound[i - 1]);
    CHECK(chk.condition_ok[i]);
  }
  CHECK(chk.consistent());
  CHECK(large_deviation_bound(0.0) == 4.0);
}

TEST_CASE("large deviation condition flag") {
  const std::vector<Complex> ones(10, Complex{1.0, 0.0});
  const std::vector<double> lambdas{1.0, 20.0};
  const auto chk = ldt_empirical(ones, 0.5, lambdas, 1000, Seed{1, 0});
  CHECK(chk.sigma == doctest::Approx(std::sqrt(2.5)));
  CHECK(chk.condition_ok[0]);
  CHECK_FALSE(chk.condition_ok[1]);
}

TEST_CASE("large deviation results are independent of thread count") {
  std::vector<Complex> w;
  for (int j = 0; j < 200; ++j) w.emplace_back(std::cos(j), std::sin(0.5 * j));
  const std::vector<double> lambdas{0.5, 1.5, 3.0};
  const auto a = ldt_empirical(w, 0.1, lambdas, 5000, Seed{3, 1}, 1);
  const auto b = ldt_empirical(w, 0.1, lambdas, 5000, Seed{3, 1}, 3);
  CHECK(a.exceed_freq == b.exceed_freq);
}

TEST_CASE("moment generating function inequality") {
  const auto taus = default_mgf_tau_grid();
  const auto xs = default_mgf_x_grid();
  CHECK(taus.size() == 99);
  CHECK(xs.size() == 2001);
  const auto chk = mgf_inequality_check(taus, xs);
  CHECK(chk.points_checked == taus.size() * xs.size());
  CHECK(chk.grid_holds());
  CHECK(mgf_lhs(0.3, 0.0) == doctest::Approx(1.0));
  CHECK(mgf_holds(0.3, 0.0));

  const double l = mgf_lhs(0.01, 10.0), r = mgf_rhs(0.01, 10.0);
  CHECK(l > r);
  CHECK_FALSE(mgf_holds(0.01, 10.0));

  // The probe x = tau^{-1/2} only breaks the inequality for small tau.
  for (const auto& probe : chk.probes) {
    CHECK(probe.x == doctest::Approx(1.0 / std::sqrt(probe.tau)));
    if (probe.tau <= 0.03 + 1e-12) CHECK(probe.fails);
    if (probe.tau >= 0.04 - 1e-12) CHECK_FALSE(probe.fails);
  }
}

TEST_CASE("binomial moments against Stirling expansion") {
  const auto m = moment_bound_check(100, 0.1, 5);
  CHECK(m.exact_moment == doctest::Approx(210204.424).epsilon(1e-10));
  CHECK(m.ok);
  CHECK(m.exact_moment <= m.bound);

  const auto one = moment_bound_check(1, 0.37, 3);
  CHECK(one.exact_moment == doctest::Approx(0.37));
  CHECK(one.ok);
  const auto first = moment_bound_check(250, 0.2, 1);
  CHECK(first.exact_moment == doctest::Approx(50.0));

  for (std::int64_t n = 1; n <= 100; ++n)
    for (int q = 1; q <= 10; ++q)
      for (double tau : {0.01, 0.1, 0.5, 0.9}) {
        const auto c = moment_bound_check(n, tau, q);
        CHECK(c.ok);
        const double ref = static_cast<double>(oracle::binomial_moment_stirling(n, tau, q));
        CHECK(c.exact_moment == doctest::Approx(ref).epsilon(1e-9));
      }
}

TEST_CASE("binomial moments stay finite at large q") {
  const auto c = moment_bound_check(10000, 0.5, 30);
  CHECK(std::isfinite(c.log_exact));
  CHECK(c.log_exact == doctest::Approx(30.0 * std::log(5000.0)).epsilon(1e-3));
  CHECK(c.ok);
}

TEST_CASE("Salem-Zygmund violation counts") {
  const std::int64_t n = 1024;
  const std::vector<Complex> ones(static_cast<std::size_t>(n), Complex{1.0, 0.0});
  const auto chk = salem_zygmund_check(n, 0.5, ones, 200, Seed{17, 0}, 4);
  REQUIRE(chk.conditions_ok);
  CHECK(chk.violations == 0);
  CHECK(chk.trials == 200);
  CHECK(chk.max_sup < chk.threshold);
  CHECK(chk.probability_bound == doctest::Approx(4.0 * std::pow(static_cast<double>(n), -8.0)));
}

TEST_CASE("Salem-Zygmund preconditions") {
  std::vector<Complex> single(64, Complex{0.0, 0.0});
  single[10] = 1.0;
  std::string why;
  CHECK_FALSE(salem_conditions(64, 0.5, single, &why));
  CHECK_FALSE(why.empty());
  const auto skipped = salem_zygmund_check(64, 0.5, single, 10, Seed{});
  CHECK_FALSE(skipped.conditions_ok);
  CHECK(skipped.trials == 0);
  CHECK_FALSE(skipped.diagnostic.empty());

  const std::vector<Complex> ones16(16, Complex{1.0, 0.0});
  CHECK_FALSE(salem_conditions(16, 0.999, ones16));
}

TEST_CASE("centred progression sup constants are reported") {
  const auto r = perturbed_ap_sup_constant(9 * 64, 5, 9, 64, 4, 50, Seed{8, 8});
  CHECK(r.trials == 50);
  CHECK(std::isfinite(r.max_constant));
  CHECK(r.max_constant >= r.mean_constant);
  CHECK(r.mean_constant > 0.0);
}

TEST_CASE("centred square variance") {
  for (double tau : {0.05, 0.1, 0.3, 0.5, 0.8, 0.95}) {
    CHECK(centered_square_ratio(tau) == doctest::Approx((1.0 - 2.0 * tau) * (1.0 - 2.0 * tau)));
    const double emp = centered_square_ratio_empirical(tau, 200000, Seed{6, 0});
    CHECK(std::abs(emp - centered_square_ratio(tau)) < 0.02);
  }
  // Comparable to tau (1 - tau) only away from tau = 1/2.
  for (double tau : {0.05, 0.15, 0.25, 0.75, 0.9, 0.95}) {
    CHECK(centered_square_ratio(tau) >= 0.2);
    CHECK(centered_square_ratio(tau) <= 5.0);
  }
  CHECK(centered_square_ratio(0.5) == doctest::Approx(0.0));
}
