#ifndef NRSAMPLE_FFT_HPP
#define NRSAMPLE_FFT_HPP

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "nrsample/grid.hpp"

namespace nrsample {

// Thin FFTW wrapper. Plans are created once per (rows, cols, direction) under
// a lock and executed through the new-array interface, which FFTW documents
// as thread-safe. Plans use FFTW_UNALIGNED so any std::vector buffer works.
namespace fft_detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(static_cast<std::size_t>(rows) * cols);
    std::vector<std::complex<double>> out(in.size());
    fftw_plan plan = fftw_plan_dft_2d(
        rows, cols, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute(const Grid<std::complex<double>>& in,
                    Grid<std::complex<double>>& out, int sign) {
  out = Grid<std::complex<double>>(in.rows(), in.cols());
  if (in.empty()) return;
  fftw_plan plan = PlanCache::instance().get(in.rows(), in.cols(), sign);
  // FFTW does not write to the input of an out-of-place complex transform.
  auto* src = const_cast<std::complex<double>*>(in.values().data());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src),
                   reinterpret_cast<fftw_complex*>(out.values().data()));
}

}  // namespace fft_detail

/// X[k,l] = sum x[m,n] exp(-2 pi i (k m / M + l n / N)), unnormalized.
inline Grid<std::complex<double>> dft2(const Grid<std::complex<double>>& x) {
  Grid<std::complex<double>> out;
  fft_detail::execute(x, out, FFTW_FORWARD);
  return out;
}

inline Grid<std::complex<double>> dft2(const Grid<double>& x) {
  Grid<std::complex<double>> c(x.rows(), x.cols());
  auto src = x.values();
  auto dst = c.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i];
  return dft2(c);
}

/// Inverse of dft2, including the 1/(M N) factor.
inline Grid<std::complex<double>> idft2(const Grid<std::complex<double>>& x) {
  Grid<std::complex<double>> out;
  fft_detail::execute(x, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

}  // namespace nrsample

#endif  // NRSAMPLE_FFT_HPP
