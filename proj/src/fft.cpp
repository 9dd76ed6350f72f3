#include "r2usbl/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace r2usbl::fft {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    std::vector<double> real(n);
    std::vector<Complex> cplx(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags);
    p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags);
    if (!p.r2c || !p.c2r) throw std::runtime_error("fftw planning failed");
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<Complex> forward(std::span<const double> input, std::size_t length) {
  std::vector<double> buf(length, 0.0);
  std::copy_n(input.begin(), std::min(input.size(), length), buf.begin());
  std::vector<Complex> out(length / 2 + 1);
  const auto& plan = cache().get(length);
  fftw_execute_dft_r2c(plan.r2c, buf.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> inverse(std::span<const Complex> bins, std::size_t length) {
  if (bins.size() != length / 2 + 1) throw std::invalid_argument("fft::inverse: bin count mismatch");
  // c2r overwrites its input
  std::vector<Complex> work(bins.begin(), bins.end());
  std::vector<double> out(length);
  const auto& plan = cache().get(length);
  fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(work.data()), out.data());
  const double scale = 1.0 / static_cast<double>(length);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace r2usbl::fft
