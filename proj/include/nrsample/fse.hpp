#ifndef NRSAMPLE_FSE_HPP
#define NRSAMPLE_FSE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrsample/config.hpp"
#include "nrsample/errors.hpp"
#include "nrsample/fft.hpp"
#include "nrsample/image.hpp"
#include "nrsample/sensor.hpp"

namespace nrsample {

/// Frequency selective extrapolation parameters.
///
/// The image is processed in raster order over block_size x block_size target
/// blocks; each is modeled from a fft_size x fft_size support window centered
/// on it. Known pixels are weighted by rho^d (d = distance to the window
/// center); previously reconstructed pixels additionally by delta when
/// use_reconstructed is set. gamma damps each coefficient update to
/// compensate for the non-orthogonality of the basis under the weighting.
/// spectral_prior biases basis selection toward low frequencies: candidate
/// energies are scaled by (1 - |f| sqrt(2) / F)^(2 * spectral_prior), |f| being
/// the centered frequency radius. 0 selects by plain residual energy.
struct FseConfig {
  int fft_size = 32;
  int block_size = 4;
  int iterations = 200;
  double rho = 0.7;
  double gamma = 0.5;
  double delta = 0.5;
  bool use_reconstructed = true;
  double spectral_prior = 0.5;

  int border() const { return (fft_size - block_size) / 2; }

  void validate() const {
    auto bad = [](const std::string& why) {
      throw std::invalid_argument("invalid FSE config: " + why);
    };
    if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
      bad("fft_size must be a power of two");
    }
    if (block_size < 1) bad("block_size must be positive");
    if (fft_size < 2 * block_size) bad("fft_size must be >= 2 * block_size");
    if ((fft_size - block_size) % 2 != 0) bad("fft_size - block_size must be even");
    if (iterations < 1) bad("iterations must be positive");
    if (!(rho > 0.0 && rho < 1.0)) bad("rho must lie in (0, 1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) bad("gamma must lie in (0, 1]");
    if (!(delta >= 0.0 && delta <= 1.0)) bad("delta must lie in [0, 1]");
    if (!(spectral_prior >= 0.0 && std::isfinite(spectral_prior))) {
      bad("spectral_prior must be >= 0");
    }
  }

  friend bool operator==(const FseConfig&, const FseConfig&) = default;
};

/// Applies one `key = value` setting; unknown keys throw.
inline void set_fse_option(FseConfig& cfg, const std::string& key,
                           const std::string& value) {
  if (key == "fft_size") {
    cfg.fft_size = parse_number<int>(key, value);
  } else if (key == "block_size") {
    cfg.block_size = parse_number<int>(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_number<int>(key, value);
  } else if (key == "rho") {
    cfg.rho = parse_number<double>(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_number<double>(key, value);
  } else if (key == "delta") {
    cfg.delta = parse_number<double>(key, value);
  } else if (key == "use_reconstructed") {
    cfg.use_reconstructed = parse_bool(key, value);
  } else if (key == "spectral_prior") {
    cfg.spectral_prior = parse_number<double>(key, value);
  } else {
    throw std::invalid_argument("unknown FSE option '" + key + "'");
  }
}

inline FseConfig fse_config_from(const KeyValues& kv) {
  FseConfig cfg;
  for (const auto& [key, value] : kv) set_fse_option(cfg, key, value);
  cfg.validate();
  return cfg;
}

inline KeyValues fse_config_to_key_values(const FseConfig& cfg) {
  return {{"fft_size", std::to_string(cfg.fft_size)},
          {"block_size", std::to_string(cfg.block_size)},
          {"iterations", std::to_string(cfg.iterations)},
          {"rho", format_double(cfg.rho)},
          {"gamma", format_double(cfg.gamma)},
          {"delta", format_double(cfg.delta)},
          {"use_reconstructed", cfg.use_reconstructed ? "true" : "false"},
          {"spectral_prior", format_double(cfg.spectral_prior)}};
}

/// Greedy weighted sparse approximation of one square support window by 2D
/// Fourier basis functions.
///
/// The weighted residual spectrum Rw = DFT(w * r) is kept in the frequency
/// domain. Removing a * e_u from the residual changes it by a * W[k - u],
/// where W = DFT(w), so each iteration costs O(F^2) without any transform.
/// Only rows 0..F/2 of Rw are stored; the rest follow from Hermitian
/// symmetry because w and r are real.
class FseWindowSolver {
 public:
  using Model = Grid<std::complex<double>>;
  using Observer = std::function<void(int iteration, const Model& model)>;

  explicit FseWindowSolver(int fft_size, double spectral_prior = 0.0)
      : size_(fft_size),
        half_rows_(fft_size / 2 + 1),
        res_re_(static_cast<std::size_t>(half_rows_) * fft_size),
        res_im_(res_re_.size()),
        energy_(res_re_.size()),
        column_peak_(fft_size),
        radius_(res_re_.size()),
        prior_(res_re_.size()),
        wt_re_(4 * static_cast<std::size_t>(fft_size) * fft_size),
        wt_im_(wt_re_.size()),
        model_(fft_size, fft_size),
        is_touched_(static_cast<std::size_t>(fft_size) * fft_size, 0),
        cos_(fft_size),
        sin_(fft_size) {
    for (int k = 0; k < half_rows_; ++k) {
      for (int l = 0; l < fft_size; ++l) {
        const int kc = k <= fft_size / 2 ? k : k - fft_size;
        const int lc = l <= fft_size / 2 ? l : l - fft_size;
        radius_[static_cast<std::size_t>(k) * fft_size + l] = kc * kc + lc * lc;
        const double taper =
            1.0 - std::sqrt(double(kc * kc + lc * lc)) * std::numbers::sqrt2 / fft_size;
        prior_[static_cast<std::size_t>(k) * fft_size + l] =
            std::pow(taper, 2.0 * spectral_prior);
      }
    }
    for (int t = 0; t < fft_size; ++t) {
      double phase = 2.0 * std::numbers::pi * t / fft_size;
      cos_[t] = std::cos(phase);
      sin_[t] = std::sin(phase);
    }
  }

  int size() const { return size_; }

  /// Fits the model to `window` under `weights` (both F x F; pixels with zero
  /// weight are ignored). The model G is in DFT scale: g = IDFT(G).
  const Model& fit(const Grid<double>& window, const Grid<double>& weights,
                   int iterations, double gamma,
                   const Observer* observer = nullptr) {
    const int F = size_;
    if (window.rows() != F || window.cols() != F || !window.same_shape(weights)) {
      throw std::invalid_argument("FseWindowSolver: window must be F x F");
    }
    for (std::size_t idx : touched_) {
      model_.values()[idx] = 0.0;
      is_touched_[idx] = 0;
    }
    touched_.clear();

    Grid<double> weighted(F, F);
    {
      auto wv = weights.values();
      auto fv = window.values();
      auto out = weighted.values();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = wv[i] * fv[i];
    }
    const auto residual = dft2(weighted);
    const auto weight_spectrum = dft2(weights);
    const double w0 = weight_spectrum(0, 0).real();
    if (!(w0 > 0.0)) return model_;

    for (int k = 0; k < half_rows_; ++k) {
      for (int l = 0; l < F; ++l) {
        res_re_[k * F + l] = residual(k, l).real();
        res_im_[k * F + l] = residual(k, l).imag();
      }
    }
    const int F2 = 2 * F;
    for (int i = 0; i < F2; ++i) {
      for (int j = 0; j < F2; ++j) {
        auto w = weight_spectrum(i % F, j % F);
        wt_re_[static_cast<std::size_t>(i) * F2 + j] = w.real();
        wt_im_[static_cast<std::size_t>(i) * F2 + j] = w.imag();
      }
    }

    const double scale = static_cast<double>(F) * F;
    refresh_energy();
    for (int it = 0; it < iterations; ++it) {
      const std::size_t best = select_frequency();
      if (best == kNone) break;

      const int ku = static_cast<int>(best) / F;
      const int lu = static_cast<int>(best) % F;
      const int kc = (F - ku) % F;
      const int lc = (F - lu) % F;
      if (kc == ku && lc == lu) {
        // Self-conjugate frequency: the basis function is real.
        const double a = gamma * res_re_[best] / w0;
        add_coefficient(ku, lu, {scale * a, 0.0});
        subtract_real(ku, lu, a);
      } else {
        const std::complex<double> a =
            gamma * std::complex<double>(res_re_[best], res_im_[best]) / w0;
        add_coefficient(ku, lu, scale * a);
        add_coefficient(kc, lc, scale * std::conj(a));
        subtract_pair(ku, lu, a);
      }
      if (observer != nullptr && *observer) (*observer)(it, model_);
    }
    return model_;
  }

  /// Real part of IDFT(G) at window position (m, n).
  double evaluate(int m, int n) const {
    const int F = size_;
    double sum = 0.0;
    for (std::size_t idx : touched_) {
      const int k = static_cast<int>(idx) / F;
      const int l = static_cast<int>(idx) % F;
      const int t = (k * m + l * n) % F;
      const auto g = model_.values()[idx];
      sum += g.real() * cos_[t] - g.imag() * sin_[t];
    }
    return sum / (static_cast<double>(F) * F);
  }

  const Model& model() const { return model_; }

 private:
  void add_coefficient(int k, int l, std::complex<double> delta) {
    const std::size_t idx = static_cast<std::size_t>(k) * size_ + l;
    if (!is_touched_[idx]) {
      is_touched_[idx] = 1;
      touched_.push_back(idx);
    }
    model_.values()[idx] += delta;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Largest prior-weighted |Rw|^2. Values within a relative kTieTolerance of
  // the maximum count as ties and go to the lowest frequency, then row-major order.
  // Exact ties are common: on a regular lattice every frequency has aliases
  // of identical magnitude.
  std::size_t select_frequency() const {
    double peak = 0.0;
    for (double v : column_peak_) peak = v > peak ? v : peak;
    if (!(peak > 0.0)) return kNone;
    const double threshold = peak * (1.0 - kTieTolerance);
    const std::size_t count = energy_.size();
    std::size_t best = kNone;
    for (std::size_t i = 0; i < count; ++i) {
      if (energy_[i] >= threshold &&
          (best == kNone || radius_[i] < radius_[best])) {
        best = i;
      }
    }
    return best;
  }

  void refresh_energy() {
    const int F = size_;
    std::fill(column_peak_.begin(), column_peak_.end(), 0.0);
    for (int k = 0; k < half_rows_; ++k) {
      const std::size_t row = static_cast<std::size_t>(k) * F;
      for (int l = 0; l < F; ++l) {
        const double e = (res_re_[row + l] * res_re_[row + l] +
                         res_im_[row + l] * res_im_[row + l]) * prior_[row + l];
        energy_[row + l] = e;
        column_peak_[l] = e > column_peak_[l] ? e : column_peak_[l];
      }
    }
  }

  // Rw[k] -= a * W[k - u] for real a.
  void subtract_real(int ku, int lu, double a) {
    const int F = size_;
    const std::size_t F2 = 2 * static_cast<std::size_t>(F);
    std::fill(column_peak_.begin(), column_peak_.end(), 0.0);
    for (int k = 0; k < half_rows_; ++k) {
      const std::size_t off = (k - ku + F) * F2 + (F - lu);
      const std::size_t row = static_cast<std::size_t>(k) * F;
      update_row_real(F, a, wt_re_.data() + off, wt_im_.data() + off,
                      res_re_.data() + row, res_im_.data() + row,
                      prior_.data() + row, energy_.data() + row, column_peak_.data());
    }
  }

  // Rw[k] -= a * W[k - u] + conj(a) * W[k + u].
  void subtract_pair(int ku, int lu, std::complex<double> a) {
    const int F = size_;
    const std::size_t F2 = 2 * static_cast<std::size_t>(F);
    std::fill(column_peak_.begin(), column_peak_.end(), 0.0);
    for (int k = 0; k < half_rows_; ++k) {
      const std::size_t off1 = (k - ku + F) * F2 + (F - lu);
      const std::size_t off2 = (k + ku) * F2 + lu;
      const std::size_t row = static_cast<std::size_t>(k) * F;
      update_row_pair(F, a.real(), a.imag(), wt_re_.data() + off1,
                      wt_im_.data() + off1, wt_re_.data() + off2,
                      wt_im_.data() + off2, res_re_.data() + row,
                      res_im_.data() + row, prior_.data() + row, energy_.data() + row,
                      column_peak_.data());
    }
  }

  static void update_row_real(int F, double a, const double* __restrict wr,
                              const double* __restrict wi,
                              double* __restrict rr, double* __restrict ri,
                              const double* __restrict pr, double* __restrict en,
                              double* __restrict peak) {
    for (int l = 0; l < F; ++l) {
      const double re = rr[l] - a * wr[l];
      const double im = ri[l] - a * wi[l];
      const double e = (re * re + im * im) * pr[l];
      rr[l] = re;
      ri[l] = im;
      en[l] = e;
      peak[l] = e > peak[l] ? e : peak[l];
    }
  }

  static void update_row_pair(int F, double ar, double ai,
                              const double* __restrict w1r,
                              const double* __restrict w1i,
                              const double* __restrict w2r,
                              const double* __restrict w2i,
                              double* __restrict rr, double* __restrict ri,
                              const double* __restrict pr, double* __restrict en,
                              double* __restrict peak) {
    for (int l = 0; l < F; ++l) {
      const double re = rr[l] - (ar * (w1r[l] + w2r[l]) - ai * (w1i[l] - w2i[l]));
      const double im = ri[l] - (ar * (w1i[l] + w2i[l]) + ai * (w1r[l] - w2r[l]));
      const double e = (re * re + im * im) * pr[l];
      rr[l] = re;
      ri[l] = im;
      en[l] = e;
      peak[l] = e > peak[l] ? e : peak[l];
    }
  }

  int size_;
  int half_rows_;
  static constexpr double kTieTolerance = 1e-9;

  std::vector<double> res_re_, res_im_;  // Rw, rows 0..F/2
  std::vector<double> energy_;           // |Rw|^2 * prior
  std::vector<double> column_peak_;      // max of energy_ per column
  std::vector<int> radius_;              // squared centered frequency
  std::vector<double> prior_;            // selection weight per frequency
  std::vector<double> wt_re_, wt_im_;    // W tiled 2x2 for wrap-free shifts
  Model model_;
  std::vector<std::size_t> touched_;
  std::vector<std::uint8_t> is_touched_;
  std::vector<double> cos_, sin_;
};

/// Per-iteration view into a running reconstruction, for diagnostics.
struct FseIterationEvent {
  int block_row = 0;
  int block_col = 0;
  int iteration = 0;
  const Grid<double>& window;
  const Grid<double>& weights;
  const Grid<std::complex<double>>& model;
};

using FseObserver = std::function<void(const FseIterationEvent&)>;

struct ReconResult {
  GrayImage image;
  std::string method;
};

namespace detail {

// Mirror about the edge pixels: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
// This keeps index parity, so a reflected 1/4-sampling mask still has one
// sample per aligned 2x2 cell. Requires n >= 2.
inline int reflect_index(int i, int n) {
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

enum PixelState : std::uint8_t { kUnknown = 0, kReconstructed = 1, kSampled = 2 };

}  // namespace detail

/// Reconstructs every covered pixel of `input`; sampled pixels are copied
/// through unchanged. Output is clamped to [0, 255].
inline ReconResult reconstruct_fse(const MaskedImage& input,
                                   const FseConfig& cfg,
                                   const FseObserver& observer = {}) {
  cfg.validate();
  require_finite(input.image, "reconstruct_fse");
  if (!input.image.same_shape(input.mask.bits())) {
    throw std::invalid_argument("reconstruct_fse: image/mask dimension mismatch");
  }
  const int M = input.image.rows();
  const int N = input.image.cols();
  const int F = cfg.fft_size;
  const int B = cfg.block_size;
  const int border = cfg.border();

  GrayImage out = input.image;
  Grid<std::uint8_t> state(M, N, detail::kUnknown);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      if (input.mask.is_open(m, n)) state(m, n) = detail::kSampled;
    }
  }

  Grid<double> decay(F, F);
  const double center = (F - 1) / 2.0;
  for (int i = 0; i < F; ++i) {
    for (int j = 0; j < F; ++j) {
      decay(i, j) = std::pow(cfg.rho, std::hypot(i - center, j - center));
    }
  }
  const double reconstructed_weight = cfg.use_reconstructed ? cfg.delta : 0.0;

  FseWindowSolver solver(F, cfg.spectral_prior);
  Grid<double> window(F, F);
  Grid<double> weights(F, F);
  for (int y0 = 0; y0 < M; y0 += B) {
    for (int x0 = 0; x0 < N; x0 += B) {
      const int y1 = std::min(y0 + B, M);
      const int x1 = std::min(x0 + B, N);
      bool pending = false;
      for (int m = y0; m < y1 && !pending; ++m) {
        for (int n = x0; n < x1; ++n) {
          if (state(m, n) == detail::kUnknown) {
            pending = true;
            break;
          }
        }
      }
      if (!pending) continue;

      for (int i = 0; i < F; ++i) {
        const int m = detail::reflect_index(y0 - border + i, M);
        for (int j = 0; j < F; ++j) {
          const int n = detail::reflect_index(x0 - border + j, N);
          double w = 0.0;
          if (state(m, n) == detail::kSampled) {
            w = decay(i, j);
          } else if (state(m, n) == detail::kReconstructed) {
            w = reconstructed_weight * decay(i, j);
          }
          weights(i, j) = w;
          window(i, j) = w > 0.0 ? out(m, n) : 0.0;
        }
      }

      FseWindowSolver::Observer hook;
      if (observer) {
        hook = [&](int it, const FseWindowSolver::Model& model) {
          observer(FseIterationEvent{y0 / B, x0 / B, it, window, weights, model});
        };
      }
      solver.fit(window, weights, cfg.iterations, cfg.gamma,
                 observer ? &hook : nullptr);

      for (int m = y0; m < y1; ++m) {
        for (int n = x0; n < x1; ++n) {
          if (state(m, n) != detail::kUnknown) continue;
          double g = solver.evaluate(m - y0 + border, n - x0 + border);
          out(m, n) = std::clamp(g, 0.0, kMaxIntensity);
          state(m, n) = detail::kReconstructed;
        }
      }
    }
  }
  return {std::move(out), "fse"};
}

}  // namespace nrsample

#endif  // NRSAMPLE_FSE_HPP
