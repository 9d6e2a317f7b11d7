#ifndef NRSAMPLE_TESTS_SUPPORT_HPP
#define NRSAMPLE_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "nrsample/image.hpp"
#include "nrsample/mask.hpp"

namespace testing_support {

using nrsample::GrayImage;
using nrsample::Grid;
using nrsample::SamplingMask;

inline GrayImage random_image(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  GrayImage img(rows, cols);
  for (auto& v : img.values()) v = dist(rng);
  return img;
}

// Independent brute-force 2D DFT, forward, unnormalized.
inline Grid<std::complex<double>> naive_dft(const Grid<double>& x) {
  const int M = x.rows();
  const int N = x.cols();
  Grid<std::complex<double>> out(M, N);
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < N; ++l) {
      std::complex<double> acc = 0.0;
      for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N; ++n) {
          const double phase =
              -2.0 * std::numbers::pi * (double(k) * m / M + double(l) * n / N);
          acc += x(m, n) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
      }
      out(k, l) = acc;
    }
  }
  return out;
}

// True when every aligned 2x2 cell holds exactly one open bit.
inline bool quarter_sampled(const Grid<std::uint8_t>& bits) {
  if (bits.rows() % 2 || bits.cols() % 2) return false;
  for (int m = 0; m < bits.rows(); m += 2) {
    for (int n = 0; n < bits.cols(); n += 2) {
      int open = bits(m, n) + bits(m, n + 1) + bits(m + 1, n) + bits(m + 1, n + 1);
      if (open != 1) return false;
    }
  }
  return true;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nrsample_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support

#endif
