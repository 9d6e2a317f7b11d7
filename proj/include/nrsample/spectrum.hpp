#ifndef NRSAMPLE_SPECTRUM_HPP
#define NRSAMPLE_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrsample/fft.hpp"
#include "nrsample/grid.hpp"
#include "nrsample/mask.hpp"

namespace nrsample {

/// |DFT| of a mask divided by its maximum, so the dominant peak is 1.
struct Spectrum {
  Grid<double> magnitude;

  int rows() const { return magnitude.rows(); }
  int cols() const { return magnitude.cols(); }
};

struct SpectralPeak {
  int k = 0;  // row frequency
  int l = 0;  // column frequency
  double magnitude = 0.0;
};

/// Works on any binary grid, including hypothetical non-1/4 masks. An
/// all-zero grid yields an all-zero spectrum.
inline Spectrum amplitude_spectrum(const Grid<std::uint8_t>& bits) {
  Grid<double> real(bits.rows(), bits.cols());
  auto src = bits.values();
  auto dst = real.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 1.0 : 0.0;
  auto transform = dft2(real);

  Spectrum spec{Grid<double>(bits.rows(), bits.cols())};
  auto mag = spec.magnitude.values();
  auto freq = transform.values();
  double peak = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::abs(freq[i]);
    peak = std::max(peak, mag[i]);
  }
  if (peak > 0.0) {
    for (auto& m : mag) m /= peak;
  }
  return spec;
}

inline Spectrum amplitude_spectrum(const SamplingMask& mask) {
  return amplitude_spectrum(mask.bits());
}

/// The `count` largest magnitudes, descending; equal magnitudes keep
/// row-major frequency order.
inline std::vector<SpectralPeak> dominant_peaks(const Spectrum& spec,
                                                int count) {
  if (count < 1) throw std::invalid_argument("dominant_peaks: count must be >= 1");
  const auto mag = spec.magnitude.values();
  if (static_cast<std::size_t>(count) > mag.size()) {
    throw std::invalid_argument("dominant_peaks: count " + std::to_string(count) +
                                " exceeds spectrum size " +
                                std::to_string(mag.size()));
  }
  std::vector<std::size_t> order(mag.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (mag[a] != mag[b]) return mag[a] > mag[b];
                      return a < b;
                    });
  std::vector<SpectralPeak> peaks;
  peaks.reserve(count);
  const int cols = spec.cols();
  for (int i = 0; i < count; ++i) {
    std::size_t idx = order[i];
    peaks.push_back({static_cast<int>(idx / cols), static_cast<int>(idx % cols),
                     mag[idx]});
  }
  return peaks;
}

/// Largest magnitude away from DC: 1 for regular sampling, small for
/// non-regular masks.
inline double aliasing_ratio(const Spectrum& spec) {
  const auto mag = spec.magnitude.values();
  double ratio = 0.0;
  for (std::size_t i = 1; i < mag.size(); ++i) ratio = std::max(ratio, mag[i]);
  return ratio;
}

/// 8-bit visualization: 255 * log10(1 + 100 mag) / log10(101), DC at (0, 0).
inline Grid<std::uint8_t> spectrum_to_u8(const Spectrum& spec) {
  Grid<std::uint8_t> out(spec.rows(), spec.cols());
  const double denom = std::log10(101.0);
  auto src = spec.magnitude.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    double v = 255.0 * std::log10(1.0 + 100.0 * src[i]) / denom;
    dst[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  }
  return out;
}

}  // namespace nrsample

#endif  // NRSAMPLE_SPECTRUM_HPP
