#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's FFT or convolution code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline cplx direct_value(const std::vector<std::int64_t>& freqs, const std::vector<cplx>& a, double theta) {
  cplx s{};
  for (std::size_t i = 0; i < freqs.size(); ++i)
    s += a[i] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(freqs[i]) * theta);
  return s;
}

/// (1/M) sum_m |f(m/M)|^p by direct summation.
inline double direct_power_mean(const std::vector<std::int64_t>& freqs, const std::vector<cplx>& a, double p,
                                std::size_t points) {
  long double acc = 0.0L;
  for (std::size_t m = 0; m < points; ++m)
    acc += std::pow(std::abs(direct_value(freqs, a, static_cast<double>(m) / static_cast<double>(points))), p);
  return static_cast<double>(acc / points);
}

/// #{(n1, n2, n3, n4) in A^4 : n1 + n2 = n3 + n4}.
inline std::int64_t quadruple_count(const std::vector<std::int64_t>& a) {
  const std::set<std::int64_t> s(a.begin(), a.end());
  std::int64_t count = 0;
  for (auto x : a)
    for (auto y : a)
      for (auto z : a)
        if (s.count(x + y - z)) ++count;
  return count;
}

/// sum over sums s of |sum_{n1+..+nk = s} a_{n1} ... a_{nk}|^2 by enumerating all k-tuples.
inline double tuple_moment(const std::vector<std::int64_t>& freqs, const std::vector<cplx>& a, int k) {
  std::map<std::int64_t, cplx> sums;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  const std::size_t n = freqs.size();
  for (;;) {
    std::int64_t s = 0;
    cplx prod{1.0, 0.0};
    for (auto i : idx) {
      s += freqs[i];
      prod *= a[i];
    }
    sums[s] += prod;
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  double total = 0.0;
  for (const auto& [s, v] : sums) total += std::norm(v);
  return total;
}

/// Ordered pairs (n, m) with n - m = lag.
inline std::int64_t pair_count(const std::vector<std::int64_t>& a, std::int64_t lag) {
  std::int64_t c = 0;
  for (auto x : a)
    for (auto y : a)
      if (x - y == lag) ++c;
  return c;
}

/// E[Bin(n, tau)^q] = sum_j S(q, j) n (n-1) ... (n-j+1) tau^j with Stirling numbers of the second kind.
inline long double binomial_moment_stirling(std::int64_t n, long double tau, int q) {
  std::vector<std::vector<long double>> S(static_cast<std::size_t>(q) + 1,
                                          std::vector<long double>(static_cast<std::size_t>(q) + 1, 0.0L));
  S[0][0] = 1.0L;
  for (int i = 1; i <= q; ++i)
    for (int j = 1; j <= i; ++j) S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
  long double total = 0.0L, falling = 1.0L, power = 1.0L;
  for (int j = 1; j <= q; ++j) {
    falling *= static_cast<long double>(n - j + 1);
    power *= tau;
    if (n - j + 1 <= 0) break;
    total += S[q][j] * falling * power;
  }
  return total;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// E A_l for the perturbed progression {b + a j + xi_j}, xi_j uniform on [-s, s],
/// with lag l = a i + d. For i = 0 only l = 0 contributes (A_0 = L).
inline double perturbed_ap_mean_lag(std::int64_t length, std::int64_t a, std::int64_t s, std::int64_t lag) {
  const double w = static_cast<double>(2 * s + 1);
  if (lag == 0) return static_cast<double>(length);
  double total = 0.0;
  for (std::int64_t i = -(length - 1); i <= length - 1; ++i) {
    if (i == 0) continue;
    const std::int64_t d = lag - a * i;
    if (std::abs(d) > 2 * s) continue;
    total += static_cast<double>(length - std::abs(i)) * (w - static_cast<double>(std::abs(d))) / (w * w);
  }
  return total;
}

}  // namespace oracle
