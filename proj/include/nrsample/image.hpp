#ifndef NRSAMPLE_IMAGE_HPP
#define NRSAMPLE_IMAGE_HPP

#include <cmath>
#include <string>

#include "nrsample/errors.hpp"
#include "nrsample/grid.hpp"

namespace nrsample {

inline constexpr double kMaxIntensity = 255.0;

/// Grayscale intensities on the 8-bit luma scale [0, 255], stored as doubles
/// so reconstructions are not quantized until export.
class GrayImage : public Grid<double> {
 public:
  using Grid<double>::Grid;

  GrayImage() = default;
  explicit GrayImage(Grid<double> g) : Grid<double>(std::move(g)) {}
};

/// Throws InvalidInput if any pixel is NaN or infinite.
inline void require_finite(const GrayImage& image, const char* context) {
  for (double v : image.values()) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(context) + ": non-finite pixel value");
    }
  }
}

/// Throws InvalidInput unless every pixel is finite and within [0, 255].
inline void require_gray_range(const GrayImage& image, const char* context) {
  require_finite(image, context);
  for (double v : image.values()) {
    if (v < 0.0 || v > kMaxIntensity) {
      throw InvalidInput(std::string(context) + ": pixel value " +
                         std::to_string(v) + " outside [0, 255]");
    }
  }
}

}  // namespace nrsample

#endif  // NRSAMPLE_IMAGE_HPP
