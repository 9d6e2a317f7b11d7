#ifndef NRSAMPLE_IMAGE_IO_HPP
#define NRSAMPLE_IMAGE_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "nrsample/image.hpp"
#include "nrsample/mask.hpp"

namespace nrsample {

/// Rec. 601 luma, used whenever color input is ingested.
inline double rec601_luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

inline std::uint8_t quantize_u8(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::string& path,
                             const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// Netpbm header tokenizer: whitespace separated, '#' comments to end of line.
class PnmCursor {
 public:
  PnmCursor(const std::vector<unsigned char>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw std::runtime_error("'" + name_ + "': malformed PGM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 30)) {
        throw std::runtime_error("'" + name_ + "': PGM header value too large");
      }
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw std::runtime_error("'" + name_ + "': malformed PGM header");
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;  // after the magic number
};

// Raw samples (0..maxval) of a P2/P5 file.
struct PgmRaster {
  Grid<int> samples;
  int maxval = 255;
};

inline PgmRaster decode_pgm(const std::vector<unsigned char>& bytes,
                            const std::string& name) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw std::runtime_error("'" + name + "': not a PGM (P5/P2) file");
  }
  const bool binary = bytes[1] == '5';
  PnmCursor cur(bytes, name);
  const int width = cur.next_int();
  const int height = cur.next_int();
  const int maxval = cur.next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error("'" + name + "': invalid PGM dimensions or maxval");
  }
  PgmRaster raster{Grid<int>(height, width), maxval};
  if (binary) {
    cur.skip_single_space();
    const std::size_t bps = maxval < 256 ? 1 : 2;
    const std::size_t need = static_cast<std::size_t>(width) * height * bps;
    if (bytes.size() - cur.pos() < need) {
      throw std::runtime_error("'" + name + "': truncated PGM data");
    }
    const unsigned char* p = bytes.data() + cur.pos();
    for (auto& s : raster.samples.values()) {
      s = bps == 1 ? p[0] : (p[0] << 8) | p[1];
      p += bps;
    }
  } else {
    for (auto& s : raster.samples.values()) s = cur.next_int();
  }
  for (int s : raster.samples.values()) {
    if (s > maxval) throw std::runtime_error("'" + name + "': sample > maxval");
  }
  return raster;
}

inline std::vector<unsigned char> encode_pgm(const Grid<std::uint8_t>& pixels) {
  std::string header = "P5\n" + std::to_string(pixels.cols()) + " " +
                       std::to_string(pixels.rows()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.insert(out.end(), pixels.values().begin(), pixels.values().end());
  return out;
}

inline bool ends_with_ci(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  });
}

}  // namespace detail

inline Grid<std::uint8_t> to_u8(const GrayImage& image) {
  Grid<std::uint8_t> out(image.rows(), image.cols());
  auto src = image.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = quantize_u8(src[i]);
  return out;
}

inline GrayImage decode_pgm_image(const std::vector<unsigned char>& bytes,
                                  const std::string& name) {
  auto raster = detail::decode_pgm(bytes, name);
  GrayImage image(raster.samples.rows(), raster.samples.cols());
  auto src = raster.samples.values();
  auto dst = image.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = raster.maxval == 255
                 ? static_cast<double>(src[i])
                 : std::round(255.0 * src[i] / raster.maxval);
  }
  return image;
}

inline GrayImage read_pgm(const std::string& path) {
  return decode_pgm_image(detail::read_file_bytes(path), path);
}

/// 8-bit P5; values are rounded and clamped to [0, 255].
inline void write_pgm(const GrayImage& image, const std::string& path) {
  detail::write_file_bytes(path, detail::encode_pgm(to_u8(image)));
}

inline void write_pgm_u8(const Grid<std::uint8_t>& pixels,
                         const std::string& path) {
  detail::write_file_bytes(path, detail::encode_pgm(pixels));
}

/// Grayscale PNGs load directly; color PNGs go through Rec. 601 luma and are
/// rounded to the nearest 8-bit level. Alpha is dropped.
inline GrayImage read_png(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw std::runtime_error("'" + path + "': " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw std::runtime_error("'" + path + "': " + msg);
  }
  GrayImage image(static_cast<int>(png.height), static_cast<int>(png.width));
  auto dst = image.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const png_byte* p = buffer.data() + i * channels;
    dst[i] = color ? std::round(rec601_luma(p[0], p[1], p[2])) : p[0];
  }
  return image;
}

inline void write_png(const GrayImage& image, const std::string& path) {
  auto pixels = to_u8(image);
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.cols());
  png.height = static_cast<png_uint_32>(image.rows());
  png.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, pixels.values().data(),
                               0, nullptr)) {
    throw std::runtime_error("'" + path + "': " + png.message);
  }
}

/// Dispatches on the file's magic bytes (PNG or PGM).
inline GrayImage read_image(const std::string& path) {
  auto bytes = detail::read_file_bytes(path);
  static constexpr unsigned char kPngMagic[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(kPngMagic, kPngMagic + 4, bytes.begin())) {
    return read_png(path);
  }
  return decode_pgm_image(bytes, path);
}

/// PNG when the path ends in ".png", PGM otherwise.
inline void write_image(const GrayImage& image, const std::string& path) {
  if (detail::ends_with_ci(path, ".png")) {
    write_png(image, path);
  } else {
    write_pgm(image, path);
  }
}

/// Mask export: P5 with 0 = covered, 255 = open.
inline void write_mask_pgm(const SamplingMask& mask, const std::string& path) {
  Grid<std::uint8_t> pixels(mask.rows(), mask.cols());
  auto src = mask.bits().values();
  auto dst = pixels.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 255 : 0;
  write_pgm_u8(pixels, path);
}

/// Accepts only the two levels 0 and maxval; validates 1/4 sampling.
inline SamplingMask read_mask_pgm(const std::string& path) {
  auto raster = detail::decode_pgm(detail::read_file_bytes(path), path);
  Grid<std::uint8_t> bits(raster.samples.rows(), raster.samples.cols());
  auto src = raster.samples.values();
  auto dst = bits.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (src[i] != 0 && src[i] != raster.maxval) {
      throw std::runtime_error("'" + path + "': mask pixels must be 0 or " +
                               std::to_string(raster.maxval));
    }
    dst[i] = src[i] ? 1 : 0;
  }
  return SamplingMask::from_bits(std::move(bits));
}

}  // namespace nrsample

#endif  // NRSAMPLE_IMAGE_IO_HPP
