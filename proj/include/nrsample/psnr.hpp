#ifndef NRSAMPLE_PSNR_HPP
#define NRSAMPLE_PSNR_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nrsample/image.hpp"

namespace nrsample {

/// 10 log10(255^2 / MSE) over all pixels; +inf when the images are equal.
inline double psnr(const GrayImage& reference, const GrayImage& test) {
  if (!reference.same_shape(test)) {
    throw std::invalid_argument("psnr: dimension mismatch");
  }
  if (reference.empty()) throw std::invalid_argument("psnr: empty images");
  auto a = reference.values();
  auto b = test.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(a.size());
  return 10.0 * std::log10(kMaxIntensity * kMaxIntensity / mse);
}

}  // namespace nrsample

#endif  // NRSAMPLE_PSNR_HPP
