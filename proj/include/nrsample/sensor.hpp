#ifndef NRSAMPLE_SENSOR_HPP
#define NRSAMPLE_SENSOR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nrsample/image.hpp"
#include "nrsample/mask.hpp"

namespace nrsample {

/// An HR image that is valid only where `mask` is open; covered pixels are 0.
struct MaskedImage {
  GrayImage image;
  SamplingMask mask;
};

/// Plain LR sensor: every large pixel integrates the mean of its 2x2 block.
inline GrayImage acquire_lr(const GrayImage& hr) {
  if (hr.rows() % 2 != 0 || hr.cols() % 2 != 0) {
    throw std::invalid_argument("acquire_lr: odd image dimensions " +
                                std::to_string(hr.rows()) + "x" +
                                std::to_string(hr.cols()));
  }
  GrayImage lr(hr.rows() / 2, hr.cols() / 2);
  for (int u = 0; u < lr.rows(); ++u) {
    for (int v = 0; v < lr.cols(); ++v) {
      lr(u, v) = (hr(2 * u, 2 * v) + hr(2 * u, 2 * v + 1) +
                  hr(2 * u + 1, 2 * v) + hr(2 * u + 1, 2 * v + 1)) /
                 4.0;
    }
  }
  return lr;
}

/// Elementwise product with an arbitrary binary grid. Open positions keep
/// their value exactly.
inline GrayImage apply_mask(const GrayImage& hr,
                            const Grid<std::uint8_t>& bits) {
  if (!hr.same_shape(bits)) {
    throw std::invalid_argument(
        "apply_mask: dimension mismatch between image " +
        std::to_string(hr.rows()) + "x" + std::to_string(hr.cols()) +
        " and mask " + std::to_string(bits.rows()) + "x" +
        std::to_string(bits.cols()));
  }
  GrayImage out(hr.rows(), hr.cols(), 0.0);
  auto src = hr.values();
  auto dst = out.values();
  auto b = bits.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (b[i]) dst[i] = src[i];
  }
  return out;
}

/// Masked LR sensor: exactly the HR values at open positions, 0 elsewhere.
inline MaskedImage acquire_masked(const GrayImage& hr,
                                  const SamplingMask& mask) {
  return MaskedImage{apply_mask(hr, mask.bits()), mask};
}

}  // namespace nrsample

#endif  // NRSAMPLE_SENSOR_HPP
