#ifndef NRSAMPLE_MASK_HPP
#define NRSAMPLE_MASK_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nrsample/grid.hpp"

namespace nrsample {

// Quadrant indices are row-major within an aligned 2x2 cell:
//   0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
inline constexpr int quadrant_of(int m, int n) { return 2 * (m & 1) + (n & 1); }

/// Template block size b in HR pixels, or "max" (one template spans the
/// whole sensor). Orders numerically with max last.
class BlockSize {
 public:
  explicit BlockSize(int b) : value_(b) {
    if (b < 2 || b % 2 != 0) {
      throw std::invalid_argument("block size b must be even and >= 2, got " +
                                  std::to_string(b));
    }
  }

  static BlockSize max() { return BlockSize(); }

  /// Accepts a decimal even integer >= 2 or the literal "max".
  static BlockSize parse(std::string_view text) {
    if (text == "max") return max();
    int b = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), b);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument("invalid block size '" + std::string(text) +
                                  "'");
    }
    return BlockSize(b);
  }

  bool is_max() const { return value_ == 0; }

  int value() const {
    if (is_max()) throw std::logic_error("BlockSize::value() on b=max");
    return value_;
  }

  std::string str() const {
    return is_max() ? std::string("max") : std::to_string(value_);
  }

  friend bool operator==(const BlockSize&, const BlockSize&) = default;
  friend bool operator<(const BlockSize& a, const BlockSize& b) {
    if (a.is_max()) return false;
    if (b.is_max()) return true;
    return a.value_ < b.value_;
  }

 private:
  BlockSize() = default;
  int value_ = 0;
};

/// Compact stored form of a mask: one open-quadrant index per LR cell of a
/// b x b HR block.
class QuadrantTemplate {
 public:
  QuadrantTemplate(int b, Grid<std::uint8_t> cells) : cells_(std::move(cells)) {
    if (b < 2 || b % 2 != 0) {
      throw std::invalid_argument("template block size must be even and >= 2");
    }
    if (cells_.rows() != b / 2 || cells_.cols() != b / 2) {
      throw std::invalid_argument("template cell grid must be (b/2)x(b/2)");
    }
    for (auto q : cells_.values()) {
      if (q > 3) throw std::invalid_argument("quadrant index outside 0..3");
    }
  }

  int block_size() const { return 2 * cells_.rows(); }
  int cells_per_side() const { return cells_.rows(); }
  int cell(int u, int v) const { return cells_(u, v); }
  const Grid<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const QuadrantTemplate&,
                         const QuadrantTemplate&) = default;

 private:
  Grid<std::uint8_t> cells_;
};

/// Full-sensor binary HR mask (1 = open). Always satisfies the 1/4-sampling
/// property: exactly one open pixel in each aligned 2x2 cell.
class SamplingMask {
 public:
  /// Validates the 1/4-sampling property and records the given period.
  static SamplingMask from_bits(Grid<std::uint8_t> bits, BlockSize period) {
    validate(bits);
    return SamplingMask(std::move(bits), period);
  }

  /// Validates and infers the smallest even period; b=max if none is
  /// shorter than the sensor.
  static SamplingMask from_bits(Grid<std::uint8_t> bits) {
    validate(bits);
    BlockSize period = infer_period(bits);
    return SamplingMask(std::move(bits), period);
  }

  /// Builds the mask from an (M/2)x(N/2) grid of quadrant indices.
  static SamplingMask from_quadrants(const Grid<std::uint8_t>& quadrants,
                                     BlockSize period) {
    Grid<std::uint8_t> bits(2 * quadrants.rows(), 2 * quadrants.cols(), 0);
    for (int u = 0; u < quadrants.rows(); ++u) {
      for (int v = 0; v < quadrants.cols(); ++v) {
        int q = quadrants(u, v);
        if (q > 3) throw std::invalid_argument("quadrant index outside 0..3");
        bits(2 * u + q / 2, 2 * v + q % 2) = 1;
      }
    }
    return SamplingMask(std::move(bits), period);
  }

  int rows() const { return bits_.rows(); }
  int cols() const { return bits_.cols(); }
  bool is_open(int m, int n) const { return bits_(m, n) != 0; }
  const Grid<std::uint8_t>& bits() const { return bits_; }
  BlockSize period() const { return period_; }
  std::size_t open_count() const { return bits_.size() / 4; }

  /// Quadrant index of the open pixel in LR cell (u, v).
  int quadrant(int u, int v) const {
    for (int q = 0; q < 4; ++q) {
      if (bits_(2 * u + q / 2, 2 * v + q % 2)) return q;
    }
    return -1;  // unreachable for a validated mask
  }

  /// Masks compare by their bits only.
  friend bool operator==(const SamplingMask& a, const SamplingMask& b) {
    return a.bits_ == b.bits_;
  }

 private:
  SamplingMask(Grid<std::uint8_t> bits, BlockSize period)
      : bits_(std::move(bits)), period_(period) {}

  static void validate(const Grid<std::uint8_t>& bits) {
    if (bits.rows() <= 0 || bits.cols() <= 0 || bits.rows() % 2 != 0 ||
        bits.cols() % 2 != 0) {
      throw std::invalid_argument(
          "sampling mask dimensions must be positive and even, got " +
          std::to_string(bits.rows()) + "x" + std::to_string(bits.cols()));
    }
    for (int m = 0; m < bits.rows(); m += 2) {
      for (int n = 0; n < bits.cols(); n += 2) {
        int open = 0;
        for (int q = 0; q < 4; ++q) {
          auto bit = bits(m + q / 2, n + q % 2);
          if (bit > 1) throw std::invalid_argument("mask bits must be 0 or 1");
          open += bit;
        }
        if (open != 1) {
          throw std::invalid_argument(
              "not a 1/4-sampling mask: LR cell (" + std::to_string(m / 2) +
              "," + std::to_string(n / 2) + ") has " + std::to_string(open) +
              " open pixels");
        }
      }
    }
  }

  static BlockSize infer_period(const Grid<std::uint8_t>& bits) {
    int limit = std::max(bits.rows(), bits.cols());
    for (int p = 2; p < limit; p += 2) {
      bool periodic = true;
      for (int m = 0; m < bits.rows() && periodic; ++m) {
        for (int n = 0; n < bits.cols(); ++n) {
          if (bits(m, n) != bits(m % p, n % p)) {
            periodic = false;
            break;
          }
        }
      }
      if (periodic) return BlockSize(p);
    }
    return BlockSize::max();
  }

  Grid<std::uint8_t> bits_;
  BlockSize period_;
};

namespace detail {

inline void require_block_size(int b) {
  if (b < 2 || b % 2 != 0) {
    throw std::invalid_argument("block size b must be even and >= 2, got " +
                                std::to_string(b));
  }
}

inline void require_even_dims(int rows, int cols, const char* what) {
  if (rows <= 0 || cols <= 0 || rows % 2 != 0 || cols % 2 != 0) {
    throw std::invalid_argument(std::string(what) +
                                ": dimensions must be positive and even, got " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

// Quadrants come from the top two bits of successive std::mt19937_64 outputs,
// cells in row-major order. mt19937_64's output sequence is fixed by the C++
// standard, so mask sets are reproducible across platforms.
inline Grid<std::uint8_t> random_quadrants(int cell_rows, int cell_cols,
                                           std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Grid<std::uint8_t> cells(cell_rows, cell_cols);
  for (auto& q : cells.values()) q = static_cast<std::uint8_t>(engine() >> 62);
  return cells;
}

}  // namespace detail

/// Each of the (b/2)^2 cells is uniform over {0,1,2,3}, deterministic in seed.
inline QuadrantTemplate generate_template(int b, std::uint64_t seed) {
  detail::require_block_size(b);
  return QuadrantTemplate(b, detail::random_quadrants(b / 2, b / 2, seed));
}

/// Number of distinct b x b templates: 4^(b^2/4) = 2^(b^2/2), exact.
inline boost::multiprecision::cpp_int count_masks(int b) {
  detail::require_block_size(b);
  boost::multiprecision::cpp_int one = 1;
  return one << (b * b / 2);
}

/// All templates of block size b in lexicographic order of their row-major
/// cell sequence. Limited to 2^24 templates (b <= 8 is already 2^32).
inline std::vector<QuadrantTemplate> enumerate_templates(int b) {
  detail::require_block_size(b);
  const int cells = (b / 2) * (b / 2);
  if (2 * cells > 24) {
    throw std::invalid_argument("enumerate_templates: b=" + std::to_string(b) +
                                " has too many templates to enumerate");
  }
  const std::uint64_t total = std::uint64_t{1} << (2 * cells);
  std::vector<QuadrantTemplate> out;
  out.reserve(total);
  for (std::uint64_t index = 0; index < total; ++index) {
    Grid<std::uint8_t> grid(b / 2, b / 2);
    auto values = grid.values();
    for (int i = 0; i < cells; ++i) {
      values[i] = static_cast<std::uint8_t>((index >> (2 * (cells - 1 - i))) & 3);
    }
    out.emplace_back(b, std::move(grid));
  }
  return out;
}

/// Repeats the template over a rows x cols sensor, cropping at the right and
/// bottom edges. Cropping happens on LR-cell boundaries since both sizes are
/// even.
inline SamplingMask tile(const QuadrantTemplate& tpl, int rows, int cols) {
  detail::require_even_dims(rows, cols, "tile");
  const int c = tpl.cells_per_side();
  Grid<std::uint8_t> quadrants(rows / 2, cols / 2);
  for (int u = 0; u < rows / 2; ++u) {
    for (int v = 0; v < cols / 2; ++v) {
      quadrants(u, v) = static_cast<std::uint8_t>(tpl.cell(u % c, v % c));
    }
  }
  return SamplingMask::from_quadrants(quadrants, BlockSize(tpl.block_size()));
}

/// Whole-sensor template (b = max): every LR cell independently uniform.
/// For rows == cols == b this matches tile(generate_template(b, seed), b, b).
inline SamplingMask generate_full_sensor_mask(int rows, int cols,
                                              std::uint64_t seed) {
  detail::require_even_dims(rows, cols, "generate_full_sensor_mask");
  return SamplingMask::from_quadrants(
      detail::random_quadrants(rows / 2, cols / 2, seed), BlockSize::max());
}

struct PixelPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
  friend auto operator<=>(const PixelPos&, const PixelPos&) = default;
};

struct MaskDiagnostics {
  std::vector<PixelPos> superpixels;  // top-left corners of solid 2x2 blocks
  std::size_t clump_score = 0;        // 4-adjacent open pairs
  double density = 0.0;
};

/// Top-left corners of every 2x2 window that is entirely open, row-major.
/// Such a window always straddles four LR cells.
inline std::vector<PixelPos> find_superpixels(const SamplingMask& mask) {
  std::vector<PixelPos> out;
  const auto& bits = mask.bits();
  for (int m = 0; m + 1 < mask.rows(); ++m) {
    for (int n = 0; n + 1 < mask.cols(); ++n) {
      if (bits(m, n) && bits(m, n + 1) && bits(m + 1, n) && bits(m + 1, n + 1)) {
        out.push_back({m, n});
      }
    }
  }
  return out;
}

/// Unordered pairs of open pixels that are horizontal or vertical neighbors.
/// Diagonal neighbors are not counted.
inline std::size_t clump_metric(const SamplingMask& mask) {
  std::size_t pairs = 0;
  const auto& bits = mask.bits();
  for (int m = 0; m < mask.rows(); ++m) {
    for (int n = 0; n < mask.cols(); ++n) {
      if (!bits(m, n)) continue;
      if (n + 1 < mask.cols() && bits(m, n + 1)) ++pairs;
      if (m + 1 < mask.rows() && bits(m + 1, n)) ++pairs;
    }
  }
  return pairs;
}

inline double open_density(const SamplingMask& mask) {
  std::size_t open = 0;
  for (auto b : mask.bits().values()) open += b;
  return static_cast<double>(open) / static_cast<double>(mask.bits().size());
}

/// Diagnostics with only the super-pixel list and density filled in.
inline MaskDiagnostics detect_superpixels(const SamplingMask& mask) {
  MaskDiagnostics d;
  d.superpixels = find_superpixels(mask);
  d.density = open_density(mask);
  return d;
}

inline MaskDiagnostics diagnose(const SamplingMask& mask) {
  MaskDiagnostics d = detect_superpixels(mask);
  d.clump_score = clump_metric(mask);
  return d;
}

// Template text format:
//   QTPL v1
//   b=<int>
//   <b/2 rows of b/2 space-separated digits 0-3>
// Every line, including the last, ends with '\n'.

inline std::string serialize_template(const QuadrantTemplate& tpl) {
  std::string out = "QTPL v1\nb=" + std::to_string(tpl.block_size()) + "\n";
  const int c = tpl.cells_per_side();
  for (int u = 0; u < c; ++u) {
    for (int v = 0; v < c; ++v) {
      if (v > 0) out += ' ';
      out += static_cast<char>('0' + tpl.cell(u, v));
    }
    out += '\n';
  }
  return out;
}

inline QuadrantTemplate parse_template(std::string_view text) {
  auto fail = [](const std::string& why) -> QuadrantTemplate {
    throw std::invalid_argument("malformed template: " + why);
  };
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) return fail("missing final newline");
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.size() < 2) return fail("missing header");
  if (lines[0] != "QTPL v1") return fail("bad magic line");
  if (lines[1].substr(0, 2) != "b=") return fail("bad block size line");
  int b = 0;
  auto bs = lines[1].substr(2);
  auto [ptr, ec] = std::from_chars(bs.data(), bs.data() + bs.size(), b);
  if (ec != std::errc() || ptr != bs.data() + bs.size() || b < 2 || b % 2) {
    return fail("invalid b");
  }
  const int c = b / 2;
  if (lines.size() != static_cast<std::size_t>(2 + c)) {
    return fail("expected " + std::to_string(c) + " cell rows");
  }
  Grid<std::uint8_t> cells(c, c);
  for (int u = 0; u < c; ++u) {
    auto line = lines[2 + u];
    if (line.size() != static_cast<std::size_t>(2 * c - 1)) {
      return fail("row " + std::to_string(u) + " has wrong length");
    }
    for (int v = 0; v < c; ++v) {
      char ch = line[2 * v];
      if (ch < '0' || ch > '3') return fail("cell value outside 0..3");
      if (v + 1 < c && line[2 * v + 1] != ' ') return fail("expected space");
      cells(u, v) = static_cast<std::uint8_t>(ch - '0');
    }
  }
  return QuadrantTemplate(b, std::move(cells));
}

inline void write_template_file(const QuadrantTemplate& tpl,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_template(tpl);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline QuadrantTemplate read_template_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_template(buf.str());
}

}  // namespace nrsample

#endif  // NRSAMPLE_MASK_HPP
