#include "majorant/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace majorant::fft {
namespace {

// FFTW's planner is not reentrant; execution of an existing plan on new
// arrays is. Plans are created once per (size, sign) and never destroyed.
struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<std::complex<double>> x, int sign) {
  if (x.size() <= 1) return;
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(cache().get(x.size(), sign), data, data);
}

}  // namespace

void synthesize(std::span<std::complex<double>> x) { run(x, FFTW_BACKWARD); }

void analyze(std::span<std::complex<double>> x) { run(x, FFTW_FORWARD); }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace majorant::fft
