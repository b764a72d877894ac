#include "majorant/setgen.hpp"

#include <cmath>
#include <random>
#include <string>
#include <type_traits>

#include "majorant/errors.hpp"

namespace majorant {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_tau(double tau) { require(tau >= 0.0 && tau <= 1.0, "tau must lie in [0, 1]"); }

}  // namespace

RandomSetModel RandomSetModel::bernoulli_delta(std::int64_t n, double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  return RandomSetModel{BernoulliModel{std::pow(static_cast<double>(n), -delta)}, n};
}

void RandomSetModel::validate() const {
  const auto n = ambient_size;
  require(n >= 1, "ambient size must be positive");
  std::visit(Overloaded{
                 [](const BernoulliModel& m) { require_tau(m.tau); },
                 [](const DoublingModel& m) { require(m.k >= 1, "doubling requires k >= 1"); },
                 [](const PowerSelectorModel& m) {
                   require(m.exponent >= 1 && m.exponent <= 3, "power selector exponent must be 1, 2 or 3");
                   require_tau(m.tau);
                 },
                 [n](const PerturbedApModel& m) {
                   require(m.b > 0 && m.b < m.a, "perturbed AP requires 0 < b < a");
                   require(m.s >= 1, "perturbed AP requires s >= 1");
                   require(2 * m.s + 1 <= m.a, "perturbed AP requires 2s + 1 <= a (disjoint windows)");
                   require(m.length == n / m.a, "perturbed AP requires L = floor(N / a)");
                   require(m.length >= 1, "perturbed AP requires L >= 1");
                   require(m.b - m.s >= 1, "perturbed AP requires b - s >= 1");
                   require(m.b + m.a * (m.length - 1) + m.s <= n, "perturbed AP exceeds [1, N]");
                 },
                 [](const SquaresModel&) {},
                 [n](const ApModel& m) {
                   require(m.a >= 1 && m.b >= 1 && m.length >= 0, "AP requires a >= 1, b >= 1, L >= 0");
                   require(m.length == 0 || m.b + m.a * (m.length - 1) <= n, "AP exceeds [1, N]");
                 },
                 [n](const Ap2dModel& m) {
                   require(m.a1 >= 1 && m.b >= 1 && m.length1 >= 1 && m.length2 >= 1, "invalid 2-D AP parameters");
                   require(m.a1 * m.length1 < m.a2, "2-D AP requires a1 * L1 < a2");
                   require(m.b + m.a1 * (m.length1 - 1) + m.a2 * (m.length2 - 1) <= n, "2-D AP exceeds [1, N]");
                 },
             },
             variant);
}

bool RandomSetModel::is_random() const {
  return std::holds_alternative<BernoulliModel>(variant) || std::holds_alternative<DoublingModel>(variant) ||
         std::holds_alternative<PowerSelectorModel>(variant) || std::holds_alternative<PerturbedApModel>(variant);
}

std::string RandomSetModel::tag() const {
  return std::visit(Overloaded{
                        [](const BernoulliModel&) { return std::string("bernoulli"); },
                        [](const DoublingModel&) { return std::string("doubling"); },
                        [](const PowerSelectorModel&) { return std::string("power"); },
                        [](const PerturbedApModel&) { return std::string("perturbed-ap"); },
                        [](const SquaresModel&) { return std::string("squares"); },
                        [](const ApModel&) { return std::string("ap"); },
                        [](const Ap2dModel&) { return std::string("ap2d"); },
                    },
                    variant);
}

FrequencySet generate(const RandomSetModel& model, const Seed& seed, std::uint64_t trial) {
  model.validate();
  const auto n = model.ambient_size;
  Rng rng = seed.rng(trial);
  return std::visit(Overloaded{
                        [&](const BernoulliModel& m) { return gen_bernoulli(n, m.tau, rng); },
                        [&](const DoublingModel& m) { return gen_doubling(n, m.k, rng); },
                        [&](const PowerSelectorModel& m) { return gen_power_selector(n, m.exponent, m.tau, rng); },
                        [&](const PerturbedApModel& m) { return gen_perturbed_ap(n, m.b, m.a, m.length, m.s, rng); },
                        [&](const SquaresModel&) { return gen_squares(n); },
                        [&](const ApModel& m) { return gen_ap(n, m.b, m.a, m.length); },
                        [&](const Ap2dModel& m) { return gen_ap2d(n, m.b, m.a1, m.length1, m.a2, m.length2); },
                    },
                    model.variant);
}

FrequencySet gen_bernoulli(std::int64_t n, double tau, Rng& rng) {
  require_tau(tau);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(n) * tau * 1.1) + 8);
  for (std::int64_t j = 1; j <= n; ++j)
    if (uniform01(rng) < tau) out.push_back(j);
  return FrequencySet(n, std::move(out));
}

std::vector<std::uint8_t> random_binary_digits(std::size_t count, Rng& rng) {
  std::vector<std::uint8_t> digits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    digits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return digits;
}

FrequencySet doubling_from_digits(std::int64_t n, int k, std::span<const std::uint8_t> digits) {
  require(k >= 1, "doubling requires k >= 1");
  require(digits.size() >= static_cast<std::size_t>(n + k), "binary expansion too short for N + k digits");
  // Sliding count of ones among d_{j+1}..d_{j+k} (digits[j]..digits[j+k-1]).
  std::vector<std::int64_t> out;
  std::int64_t ones = 0;
  for (int i = 1; i <= k; ++i) ones += digits[static_cast<std::size_t>(i)];
  for (std::int64_t j = 1; j <= n; ++j) {
    if (ones == 0) out.push_back(j);
    ones -= digits[static_cast<std::size_t>(j)];
    if (j + k < static_cast<std::int64_t>(digits.size())) ones += digits[static_cast<std::size_t>(j + k)];
  }
  return FrequencySet(n, std::move(out));
}

FrequencySet gen_doubling(std::int64_t n, int k, Rng& rng) {
  require(k >= 1, "doubling requires k >= 1");
  const auto digits = random_binary_digits(static_cast<std::size_t>(n + k + 64), rng);
  return doubling_from_digits(n, k, digits);
}

FrequencySet power_selector_from_omega(std::int64_t n, int exponent, double tau, unsigned __int128 omega) {
  require(exponent >= 1, "power selector exponent must be positive");
  require_tau(tau);
  require(static_cast<double>(exponent) * std::log2(static_cast<double>(std::max<std::int64_t>(n, 1))) < 126.0,
          "j^exponent exceeds 128-bit range");
  std::vector<std::int64_t> out;
  if (tau >= 1.0) return FrequencySet::full(n);
  // frac(x) < tau  <=>  x mod 2^128 < tau * 2^128, compared on the top 64 bits.
  const auto threshold = static_cast<unsigned __int128>(static_cast<std::uint64_t>(std::ldexp(tau, 64))) << 64;
  for (std::int64_t j = 1; j <= n; ++j) {
    unsigned __int128 power = 1;
    for (int e = 0; e < exponent; ++e) power *= static_cast<unsigned __int128>(j);
    if (power * omega < threshold) out.push_back(j);
  }
  return FrequencySet(n, std::move(out));
}

FrequencySet gen_power_selector(std::int64_t n, int exponent, double tau, Rng& rng) {
  const auto hi = static_cast<unsigned __int128>(rng());
  const auto lo = static_cast<unsigned __int128>(rng());
  return power_selector_from_omega(n, exponent, tau, (hi << 64) | lo);
}

FrequencySet perturb(const FrequencySet& progression, std::span<const std::int64_t> shifts, std::int64_t ambient_size) {
  require(shifts.size() == progression.size(), "one shift per progression element required");
  std::vector<std::int64_t> out(progression.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = progression.elems()[i] + shifts[i];
  return FrequencySet::from_unsorted(ambient_size, std::move(out));
}

FrequencySet gen_perturbed_ap(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length, std::int64_t s,
                              Rng& rng) {
  RandomSetModel{PerturbedApModel{b, a, length, s}, n}.validate();
  std::uniform_int_distribution<std::int64_t> shift(-s, s);
  std::vector<std::int64_t> out(static_cast<std::size_t>(length));
  for (std::int64_t l = 0; l < length; ++l) out[static_cast<std::size_t>(l)] = b + a * l + shift(rng);
  // Windows [j - s, j + s] are disjoint and increasing, so the output is sorted.
  return FrequencySet(n, std::move(out));
}

FrequencySet gen_squares(std::int64_t n) {
  require(n >= 1, "ambient size must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t m = 1; m * m <= n; ++m) out.push_back(m * m);
  return FrequencySet(n, std::move(out));
}

FrequencySet gen_ap(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length) {
  RandomSetModel{ApModel{b, a, length}, n}.validate();
  std::vector<std::int64_t> out(static_cast<std::size_t>(length));
  for (std::int64_t l = 0; l < length; ++l) out[static_cast<std::size_t>(l)] = b + a * l;
  return FrequencySet(n, std::move(out));
}

FrequencySet gen_ap2d(std::int64_t n, std::int64_t b, std::int64_t a1, std::int64_t length1, std::int64_t a2,
                      std::int64_t length2) {
  RandomSetModel{Ap2dModel{b, a1, length1, a2, length2}, n}.validate();
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(length1 * length2));
  for (std::int64_t j2 = 0; j2 < length2; ++j2)
    for (std::int64_t j1 = 0; j1 < length1; ++j1) out.push_back(b + j1 * a1 + j2 * a2);
  return FrequencySet(n, std::move(out));
}

}  // namespace majorant
