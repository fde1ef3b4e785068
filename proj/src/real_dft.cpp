#include "real_dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <new>

namespace ddsm::detail {

namespace {

// FFTW planning touches global state; execution on a plan does not.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

}  // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) return {};
  const std::size_t bins = n / 2 + 1;
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(bins);

  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(),
                                FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::bad_alloc();

  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute(plan);

  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    result[k] = {out[k][0], out[k][1]};
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

}  // namespace ddsm::detail
