#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "majorant/expsum.hpp"
#include "majorant/rng.hpp"

namespace majorant {

/// Independent selectors: each n in [1, N] kept with probability tau.
struct BernoulliModel {
  double tau = 0.5;
};
/// Doubling-map selectors with tau = 2^-k.
struct DoublingModel {
  int k = 1;
};
/// xi_j = [frac(j^exponent * omega) < tau].
struct PowerSelectorModel {
  int exponent = 1;
  double tau = 0.5;
};
/// {j + xi_j : j in b + a*[0, L)}, xi_j uniform on [-s, s].
struct PerturbedApModel {
  std::int64_t b = 1, a = 3, length = 1, s = 1;
};
struct SquaresModel {};
struct ApModel {
  std::int64_t b = 1, a = 1, length = 1;
};
/// {b + j1 a1 + j2 a2 : 0 <= j1 < L1, 0 <= j2 < L2} with a1 L1 < a2.
struct Ap2dModel {
  std::int64_t b = 1, a1 = 1, length1 = 1, a2 = 2, length2 = 1;
};

using ModelVariant = std::variant<BernoulliModel, DoublingModel, PowerSelectorModel, PerturbedApModel,
                                  SquaresModel, ApModel, Ap2dModel>;

/// A set-generation law together with its ambient size.
struct RandomSetModel {
  ModelVariant variant;
  std::int64_t ambient_size = 1;

  /// Bernoulli law with tau = N^-delta, 0 < delta < 1.
  static RandomSetModel bernoulli_delta(std::int64_t n, double delta);

  /// Throws DomainError if the parameters violate the law's constraints.
  void validate() const;
  bool is_random() const;
  /// Short tag used in set-file headers ("bernoulli", "perturbed-ap", ...).
  std::string tag() const;
};

FrequencySet generate(const RandomSetModel& model, const Seed& seed, std::uint64_t trial = 0);

/// tau in [0, 1]; the endpoints give the empty and the full set.
FrequencySet gen_bernoulli(std::int64_t n, double tau, Rng& rng);

/// Random binary expansion of omega with n + k + 64 digits.
std::vector<std::uint8_t> random_binary_digits(std::size_t count, Rng& rng);

/// digits[i] is the binary digit d_{i+1} of omega. Returns
/// {j in [1, n] : d_{j+1} = ... = d_{j+k} = 0}, i.e. frac(2^j omega) < 2^-k.
FrequencySet doubling_from_digits(std::int64_t n, int k, std::span<const std::uint8_t> digits);
FrequencySet gen_doubling(std::int64_t n, int k, Rng& rng);

/// omega as a 128-bit binary fraction (omega = value / 2^128).
FrequencySet power_selector_from_omega(std::int64_t n, int exponent, double tau, unsigned __int128 omega);
FrequencySet gen_power_selector(std::int64_t n, int exponent, double tau, Rng& rng);

/// Applies the given shifts (one per element of the progression, in order).
FrequencySet perturb(const FrequencySet& progression, std::span<const std::int64_t> shifts, std::int64_t ambient_size);
FrequencySet gen_perturbed_ap(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length, std::int64_t s,
                              Rng& rng);

FrequencySet gen_squares(std::int64_t n);
FrequencySet gen_ap(std::int64_t n, std::int64_t b, std::int64_t a, std::int64_t length);
FrequencySet gen_ap2d(std::int64_t n, std::int64_t b, std::int64_t a1, std::int64_t length1, std::int64_t a2,
                      std::int64_t length2);

}  // namespace majorant
