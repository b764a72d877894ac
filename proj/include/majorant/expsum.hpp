#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace majorant {

using Complex = std::complex<double>;

/// Finite set of integer frequencies inside [1, N], kept sorted.
class FrequencySet {
 public:
  FrequencySet() = default;

  /// Validates that `elems` is strictly increasing and inside [1, ambient_size].
  FrequencySet(std::int64_t ambient_size, std::vector<std::int64_t> elems);

  /// Sorts and deduplicates before validating.
  static FrequencySet from_unsorted(std::int64_t ambient_size, std::vector<std::int64_t> elems);

  /// The interval [1, N].
  static FrequencySet full(std::int64_t ambient_size);

  std::int64_t ambient_size() const noexcept { return ambient_size_; }
  std::span<const std::int64_t> elems() const noexcept { return elems_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  std::int64_t max_elem() const noexcept { return elems_.empty() ? 0 : elems_.back(); }
  std::int64_t min_elem() const noexcept { return elems_.empty() ? 0 : elems_.front(); }
  bool contains(std::int64_t n) const;

  friend bool operator==(const FrequencySet&, const FrequencySet&) = default;

 private:
  std::int64_t ambient_size_ = 1;
  std::vector<std::int64_t> elems_;
};

enum class BallDomain { LinfBall, L2Ball, Unconstrained };

/// Complex coefficients a_n attached to a FrequencySet, with the ball they
/// are declared to live in. The constraint is checked on construction.
class CoefficientSeq {
 public:
  static constexpr double kConstraintSlack = 1e-12;

  CoefficientSeq() = default;
  CoefficientSeq(FrequencySet support, std::vector<Complex> values,
                 BallDomain domain = BallDomain::Unconstrained);

  /// All-ones coefficients (the Dirichlet kernel over the support).
  static CoefficientSeq ones(const FrequencySet& support);

  const FrequencySet& support() const noexcept { return support_; }
  std::span<const Complex> values() const noexcept { return values_; }
  BallDomain domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// True when every coefficient is exactly 1.
  bool is_indicator() const;

  double l2_norm_squared() const;

 private:
  FrequencySet support_;
  std::vector<Complex> values_;
  BallDomain domain_ = BallDomain::Unconstrained;
};

/// Uniform grid theta_m = m / points on the circle.
///
/// `refine` enables the convergence ladder for exponents whose |f|^p is not a
/// trigonometric polynomial (odd or fractional p): the grid is doubled until
/// the relative change drops below kLadderTol or kMaxPoints is reached.
struct GridSpec {
  static constexpr double kDefaultOversample = 8.0;
  static constexpr double kMinOversample = 4.0;
  static constexpr std::size_t kMaxPoints = std::size_t{1} << 24;
  static constexpr double kLadderTol = 1e-9;

  std::size_t points = 0;
  double oversample = kDefaultOversample;
  bool refine = true;

  /// Next power of two >= oversample * ambient_size.
  static GridSpec for_ambient(std::int64_t ambient_size, double oversample = kDefaultOversample);

  /// Throws SizingError unless points is a power of two and
  /// points >= 4 * ambient_size.
  void validate_for(std::int64_t ambient_size) const;
};

/// A_l = sum_{n - m = l} a_n conj(a_m) for |l| <= N - 1.
class Autocorrelation {
 public:
  Autocorrelation() = default;
  Autocorrelation(std::int64_t max_lag, std::vector<Complex> values);

  std::int64_t max_lag() const noexcept { return max_lag_; }
  /// Zero outside [-max_lag, max_lag].
  Complex at(std::int64_t lag) const;
  std::span<const Complex> values() const noexcept { return values_; }

 private:
  std::int64_t max_lag_ = 0;
  std::vector<Complex> values_;
};

enum class AutocorrelationMethod { Auto, Direct, Fft };

/// f(theta_m) = sum_n a_n e(n m / M) for m = 0..M-1, by one FFT.
std::vector<Complex> evaluate_on_grid(const CoefficientSeq& coeffs, const GridSpec& grid);

/// (1/M) sum_m |values[m]|^p, accumulated in a fixed order.
double mean_abs_power(std::span<const Complex> values, double p);

/// (M^{-1} sum_m |f(theta_m)|^p)^{1/p}. Throws DomainError for p < 1.
double lp_norm(const CoefficientSeq& coeffs, double p, const GridSpec& grid);
double lp_norm(const CoefficientSeq& coeffs, double p);

/// Same as lp_norm with all-ones coefficients.
double dirichlet_norm(const FrequencySet& set, double p, const GridSpec& grid);
double dirichlet_norm(const FrequencySet& set, double p);

Autocorrelation autocorrelation(const CoefficientSeq& coeffs,
                                AutocorrelationMethod method = AutocorrelationMethod::Auto);

/// Integer pair counts #{(n, m) in S^2 : n - m = l}, indexed l + (N - 1).
std::vector<std::int64_t> autocorrelation_counts(const FrequencySet& set);

/// True for p in {2, 4, 6, ...} (exactly).
bool is_even_integer(double p);

/// Exact sum_n c_k(n)^2 where c_k is the k-fold self-convolution of the
/// indicator of `set`; equals ||sum_{n in S} e(n.)||_{2k}^{2k}.
/// Throws DomainError if the counts could overflow 64 bits.
unsigned __int128 even_moment_exact(const FrequencySet& set, int k);

/// ||sum a_n e(n.)||_p for even integer p through the k-fold self-convolution
/// (Plancherel). Uses exact integer arithmetic for indicator coefficients.
double lp_norm_even_exact(const CoefficientSeq& coeffs, int p);

struct NormEvaluation {
  double value = 0.0;
  bool exact = false;          ///< computed by self-convolution
  std::size_t grid_points = 0;  ///< final quadrature grid (0 when exact)
};

/// The p-norm by the exact convolution path when p is an even integer and the
/// counts fit in 64 bits, by quadrature on `grid` (with the ladder) otherwise.
NormEvaluation evaluate_norm(const CoefficientSeq& coeffs, double p, const GridSpec& grid);

/// ||.||_p^p of the Dirichlet kernel over `set`: exact for even p,
/// quadrature otherwise.
double dirichlet_power(const FrequencySet& set, double p);

}  // namespace majorant
