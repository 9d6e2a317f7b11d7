#ifndef NRSAMPLE_BENCH_HPP
#define NRSAMPLE_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nrsample/config.hpp"
#include "nrsample/fse.hpp"
#include "nrsample/image_io.hpp"
#include "nrsample/lin.hpp"
#include "nrsample/mask.hpp"
#include "nrsample/psnr.hpp"
#include "nrsample/sensor.hpp"

#ifndef NRSAMPLE_VERSION
#define NRSAMPLE_VERSION "0.0.0"
#endif

namespace nrsample {

inline constexpr const char* kVersion = NRSAMPLE_VERSION;

// ---------------------------------------------------------------------------
// Mask sets

inline std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed stream for one block size: the i-th draw for b is the i-th output of
/// an mt19937_64 seeded from (master_seed, b). b=max uses tag 0.
inline std::mt19937_64 draw_stream(BlockSize b, std::uint64_t master_seed) {
  const std::uint64_t tag = b.is_max() ? 0 : static_cast<std::uint64_t>(b.value());
  return std::mt19937_64(splitmix64(master_seed ^ splitmix64(tag)));
}

/// The masks of one block size, stored compactly: templates for finite b,
/// generator seeds for b=max. Masks are materialized per sensor size.
class MaskSource {
 public:
  /// b=2 always yields the four regular masks, whatever `count` is.
  /// Otherwise draws until `count` distinct masks exist.
  static MaskSource sample(BlockSize b, int count, std::uint64_t master_seed,
                           int rows, int cols) {
    if (count < 1) throw std::invalid_argument("mask count must be positive");
    MaskSource src(b);
    auto stream = draw_stream(b, master_seed);
    if (!b.is_max()) {
      const int bv = b.value();
      if (bv == 2) {
        src.templates_ = enumerate_templates(2);
        return src;
      }
      if (boost::multiprecision::cpp_int(count) > count_masks(bv)) {
        throw std::invalid_argument("requested " + std::to_string(count) +
                                    " masks but only " +
                                    count_masks(bv).str() + " exist for b=" +
                                    b.str());
      }
      std::set<std::vector<std::uint8_t>> seen;
      while (static_cast<int>(src.templates_.size()) < count) {
        auto tpl = generate_template(bv, stream());
        auto cells = tpl.cells().values();
        if (seen.emplace(cells.begin(), cells.end()).second) {
          src.templates_.push_back(std::move(tpl));
        }
      }
      return src;
    }

    detail::require_even_dims(rows, cols, "sample_mask_set");
    const int cells = (rows / 2) * (cols / 2);
    if (2 * cells < 62 && count > (std::int64_t{1} << (2 * cells))) {
      throw std::invalid_argument("requested " + std::to_string(count) +
                                  " masks but a " + std::to_string(rows) + "x" +
                                  std::to_string(cols) +
                                  " sensor has fewer distinct masks");
    }
    std::multimap<std::uint64_t, std::uint64_t> by_hash;  // hash -> seed
    while (static_cast<int>(src.seeds_.size()) < count) {
      const std::uint64_t seed = stream();
      auto mask = generate_full_sensor_mask(rows, cols, seed);
      const std::uint64_t h = hash_bits(mask);
      bool duplicate = false;
      auto [lo, hi] = by_hash.equal_range(h);
      for (auto it = lo; it != hi && !duplicate; ++it) {
        duplicate = generate_full_sensor_mask(rows, cols, it->second) == mask;
      }
      if (duplicate) continue;
      by_hash.emplace(h, seed);
      src.seeds_.push_back(seed);
    }
    return src;
  }

  BlockSize block_size() const { return b_; }
  int size() const {
    return static_cast<int>(b_.is_max() ? seeds_.size() : templates_.size());
  }

  SamplingMask make(int index, int rows, int cols) const {
    if (b_.is_max()) return generate_full_sensor_mask(rows, cols, seeds_.at(index));
    return tile(templates_.at(index), rows, cols);
  }

 private:
  explicit MaskSource(BlockSize b) : b_(b) {}

  static std::uint64_t hash_bits(const SamplingMask& mask) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (auto v : mask.bits().values()) {
      h = (h ^ v) * 1099511628211ULL;
    }
    return h;
  }

  BlockSize b_;
  std::vector<QuadrantTemplate> templates_;
  std::vector<std::uint64_t> seeds_;
};

/// Deterministic set of distinct masks for block size b on a rows x cols
/// sensor. For b=2 the set is the exhaustive four regular masks.
inline std::vector<SamplingMask> sample_mask_set(BlockSize b, int count,
                                                 std::uint64_t master_seed,
                                                 int rows, int cols) {
  auto src = MaskSource::sample(b, count, master_seed, rows, cols);
  std::vector<SamplingMask> out;
  out.reserve(src.size());
  for (int i = 0; i < src.size(); ++i) out.push_back(src.make(i, rows, cols));
  return out;
}

// ---------------------------------------------------------------------------
// Reconstructors

using Reconstructor = std::function<GrayImage(const MaskedImage&)>;

/// Name -> reconstruction method. Extra methods can be registered next to
/// the built-in "fse" and "lin".
class ReconstructorRegistry {
 public:
  static ReconstructorRegistry with_builtins(const FseConfig& fse) {
    ReconstructorRegistry reg;
    reg.add("fse", [fse](const MaskedImage& in) {
      return reconstruct_fse(in, fse).image;
    });
    reg.add("lin", [](const MaskedImage& in) { return reconstruct_lin(in).image; });
    return reg;
  }

  void add(const std::string& name, Reconstructor fn) { methods_[name] = std::move(fn); }

  const Reconstructor& at(const std::string& name) const {
    auto it = methods_.find(name);
    if (it == methods_.end()) {
      throw std::invalid_argument("unknown reconstruction method '" + name + "'");
    }
    return it->second;
  }

  bool contains(const std::string& name) const { return methods_.count(name) != 0; }

 private:
  std::map<std::string, Reconstructor> methods_;
};

// ---------------------------------------------------------------------------
// Spec and report

struct BenchSpec {
  std::vector<std::string> image_paths;
  std::vector<BlockSize> block_sizes;
  int masks_per_b = 256;
  std::vector<std::string> methods;
  std::uint64_t master_seed = 0;
  FseConfig fse;
  int jobs = 1;
  bool quantize = true;  // round reconstructions to 8 bit before PSNR
  std::string dataset = "user-supplied images";
};

/// Reads a key=value bench spec. Relative image paths resolve against the
/// spec file's directory. Keys:
///   images       comma-separated image files
///   image_dir    directory; its .png/.pgm files are used in lexicographic order
///   max_images   keep only the first N images
///   block_sizes  e.g. 2,4,8,max
///   masks_per_b, methods, master_seed, jobs, quantize, dataset
///   fse.<option> any FseConfig option
inline BenchSpec load_bench_spec(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return (q.is_absolute() ? q : base / q).lexically_normal().string();
  };
  BenchSpec spec;
  std::optional<int> max_images;
  for (const auto& [key, value] : read_key_value_file(path)) {
    if (key == "images") {
      for (auto& p : split_list(value)) spec.image_paths.push_back(resolve(p));
    } else if (key == "image_dir") {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(resolve(value))) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().string();
        if (detail::ends_with_ci(name, ".png") || detail::ends_with_ci(name, ".pgm")) {
          found.push_back(name);
        }
      }
      std::sort(found.begin(), found.end());
      spec.image_paths.insert(spec.image_paths.end(), found.begin(), found.end());
    } else if (key == "max_images") {
      max_images = parse_number<int>(key, value);
    } else if (key == "block_sizes") {
      spec.block_sizes.clear();
      for (auto& b : split_list(value)) spec.block_sizes.push_back(BlockSize::parse(b));
    } else if (key == "masks_per_b") {
      spec.masks_per_b = parse_number<int>(key, value);
    } else if (key == "methods") {
      spec.methods = split_list(value);
    } else if (key == "master_seed") {
      spec.master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "jobs") {
      spec.jobs = parse_number<int>(key, value);
    } else if (key == "quantize") {
      spec.quantize = parse_bool(key, value);
    } else if (key == "dataset") {
      spec.dataset = value;
    } else if (key.rfind("fse.", 0) == 0) {
      set_fse_option(spec.fse, key.substr(4), value);
    } else {
      throw std::invalid_argument("unknown bench spec key '" + key + "'");
    }
  }
  if (max_images && static_cast<int>(spec.image_paths.size()) > *max_images) {
    spec.image_paths.resize(*max_images);
  }
  spec.fse.validate();
  return spec;
}

struct BenchRecord {
  std::string image_id;
  BlockSize b = BlockSize::max();
  int mask_index = 0;
  std::string method;
  double psnr_db = 0.0;
};

/// Mean over images of one mask's PSNR.
struct MaskMean {
  BlockSize b = BlockSize::max();
  std::string method;
  int mask_index = 0;
  double mean_db = 0.0;
  int images = 0;
};

/// Best- and worst-mask means for one (b, method) cell.
struct CellSummary {
  BlockSize b = BlockSize::max();
  std::string method;
  double best_db = 0.0;
  int best_mask = 0;
  double worst_db = 0.0;
  int worst_mask = 0;
  int masks = 0;
};

struct BenchReport {
  KeyValues metadata;
  std::vector<BenchRecord> records;
  std::vector<std::string> errors;
  std::vector<MaskMean> mask_means;
  std::vector<CellSummary> cells;

  const CellSummary* cell(BlockSize b, const std::string& method) const {
    for (const auto& c : cells) {
      if (c.b == b && c.method == method) return &c;
    }
    return nullptr;
  }
};

/// Methods in order of first appearance.
inline std::vector<std::string> report_methods(const BenchReport& report) {
  std::vector<std::string> out;
  for (const auto& r : report.records) {
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  return out;
}

inline std::vector<BlockSize> report_block_sizes(const BenchReport& report) {
  std::vector<BlockSize> out;
  for (const auto& r : report.records) {
    if (std::find(out.begin(), out.end(), r.b) == out.end()) out.push_back(r.b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Recomputes mask means and best/worst cells from the records. Any +inf
/// record makes its mask mean +inf. Ties go to the lower mask index.
inline void compute_aggregates(BenchReport& report) {
  struct Acc {
    double sum = 0.0;
    int n = 0;
  };
  std::map<std::tuple<BlockSize, std::string, int>, Acc> acc;
  for (const auto& r : report.records) {
    auto& a = acc[{r.b, r.method, r.mask_index}];
    a.sum += r.psnr_db;
    ++a.n;
  }
  report.mask_means.clear();
  report.cells.clear();
  for (const auto& [key, a] : acc) {
    const auto& [b, method, index] = key;
    report.mask_means.push_back({b, method, index, a.sum / a.n, a.n});
  }
  for (const auto& mm : report.mask_means) {
    CellSummary* cell = nullptr;
    for (auto& c : report.cells) {
      if (c.b == mm.b && c.method == mm.method) cell = &c;
    }
    if (cell == nullptr) {
      report.cells.push_back({mm.b, mm.method, mm.mean_db, mm.mask_index,
                              mm.mean_db, mm.mask_index, 0});
      cell = &report.cells.back();
    }
    ++cell->masks;
    if (mm.mean_db > cell->best_db) {
      cell->best_db = mm.mean_db;
      cell->best_mask = mm.mask_index;
    }
    if (mm.mean_db < cell->worst_db) {
      cell->worst_db = mm.mean_db;
      cell->worst_mask = mm.mask_index;
    }
  }
}

/// Runs every (image, b, mask, method) combination. Unreadable images become
/// error entries; the run fails only if no image is usable. Odd-sized images
/// lose their last row/column. Output is independent of `jobs`.
inline BenchReport run_benchmark(
    const BenchSpec& spec,
    const ReconstructorRegistry* registry = nullptr,
    const std::function<void(const std::string&)>& log = {}) {
  if (spec.image_paths.empty()) throw std::invalid_argument("bench: no images");
  if (spec.methods.empty()) throw std::invalid_argument("bench: no methods");
  if (spec.block_sizes.empty()) throw std::invalid_argument("bench: no block sizes");
  if (spec.masks_per_b < 1) throw std::invalid_argument("bench: masks_per_b must be >= 1");
  spec.fse.validate();
  const auto builtins = ReconstructorRegistry::with_builtins(spec.fse);
  const ReconstructorRegistry& methods = registry ? *registry : builtins;
  for (const auto& m : spec.methods) methods.at(m);

  BenchReport report;
  struct Loaded {
    std::string id;
    GrayImage image;
  };
  std::vector<Loaded> images;
  std::vector<std::string> warnings;
  for (const auto& path : spec.image_paths) {
    const std::string id = std::filesystem::path(path).filename().string();
    try {
      GrayImage img = read_image(path);
      if (img.rows() < 4 || img.cols() < 4) {
        throw std::runtime_error("image smaller than 4x4");
      }
      if (img.rows() % 2 || img.cols() % 2) {
        GrayImage cropped(img.rows() & ~1, img.cols() & ~1);
        for (int m = 0; m < cropped.rows(); ++m) {
          for (int n = 0; n < cropped.cols(); ++n) cropped(m, n) = img(m, n);
        }
        warnings.push_back(id + ": odd size " + std::to_string(img.rows()) + "x" +
                           std::to_string(img.cols()) + " cropped to even");
        img = std::move(cropped);
      }
      images.push_back({id, std::move(img)});
    } catch (const std::exception& e) {
      report.errors.push_back(id + ": " + e.what());
    }
  }
  if (images.empty()) throw std::runtime_error("bench: no readable images");

  std::vector<BlockSize> block_sizes = spec.block_sizes;
  std::sort(block_sizes.begin(), block_sizes.end());
  block_sizes.erase(std::unique(block_sizes.begin(), block_sizes.end()), block_sizes.end());

  // Mask sources per (b, sensor size); finite b does not depend on size.
  std::map<std::tuple<BlockSize, int, int>, MaskSource> sources;
  auto source_for = [&](BlockSize b, const GrayImage& img) -> const MaskSource& {
    auto key = b.is_max() ? std::make_tuple(b, img.rows(), img.cols())
                          : std::make_tuple(b, 0, 0);
    auto it = sources.find(key);
    if (it == sources.end()) {
      it = sources.emplace(key, MaskSource::sample(b, spec.masks_per_b, spec.master_seed,
                                                   img.rows(), img.cols()))
               .first;
    }
    return it->second;
  };

  struct Item {
    std::size_t image;
    BlockSize b;
    int mask;
    const MaskSource* source;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (BlockSize b : block_sizes) {
      const MaskSource& src = source_for(b, images[i].image);
      for (int k = 0; k < src.size(); ++k) items.push_back({i, b, k, &src});
    }
  }

  const std::size_t per_item = spec.methods.size();
  std::vector<double> results(items.size() * per_item);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      try {
        const Item& item = items[idx];
        const GrayImage& hr = images[item.image].image;
        const MaskedImage input =
            acquire_masked(hr, item.source->make(item.mask, hr.rows(), hr.cols()));
        for (std::size_t m = 0; m < per_item; ++m) {
          GrayImage out = methods.at(spec.methods[m])(input);
          if (spec.quantize) {
            for (auto& v : out.values()) v = quantize_u8(v);
          }
          results[idx * per_item + m] = psnr(hr, out);
        }
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = items.size();
        return;
      }
      const std::size_t done = ++finished;
      if (log) {
        std::lock_guard lock(log_mutex);
        log("bench: " + std::to_string(done) + "/" + std::to_string(items.size()));
      }
    }
  };
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t idx = 0; idx < items.size(); ++idx) {
    for (std::size_t m = 0; m < per_item; ++m) {
      report.records.push_back({images[items[idx].image].id, items[idx].b,
                                items[idx].mask, spec.methods[m],
                                results[idx * per_item + m]});
    }
  }

  auto& md = report.metadata;
  md.emplace_back("tool", "nrsample bench");
  md.emplace_back("version", kVersion);
  md.emplace_back("dataset", spec.dataset);
  for (const auto& img : images) {
    md.emplace_back("image", img.id + " " + std::to_string(img.image.cols()) + "x" +
                                 std::to_string(img.image.rows()));
  }
  md.emplace_back("image_order", "as listed; directories in lexicographic filename order");
  md.emplace_back("grayscale", "color input converted with Rec. 601 luma (0.299, 0.587, 0.114), rounded to 8 bit");
  md.emplace_back("psnr", spec.quantize
                             ? "10*log10(255^2/MSE) over all pixels, reconstruction rounded to 8 bit"
                             : "10*log10(255^2/MSE) over all pixels, unquantized reconstruction");
  std::string bs;
  for (auto b : block_sizes) bs += (bs.empty() ? "" : ",") + b.str();
  md.emplace_back("block_sizes", bs);
  md.emplace_back("masks_per_b", std::to_string(spec.masks_per_b) + " (b=2: the 4 regular masks)");
  std::string ms;
  for (const auto& m : spec.methods) ms += (ms.empty() ? "" : ",") + m;
  md.emplace_back("methods", ms);
  md.emplace_back("master_seed", std::to_string(spec.master_seed));
  md.emplace_back("mask_prng", "std::mt19937_64; quadrant = top 2 bits per LR cell, row-major");
  for (const auto& [k, v] : fse_config_to_key_values(spec.fse)) md.emplace_back("fse." + k, v);
  md.emplace_back("best_mask", "per method: highest mean PSNR over images");
  for (const auto& w : warnings) md.emplace_back("warning", w);

  compute_aggregates(report);
  return report;
}

// ---------------------------------------------------------------------------
// Emission

enum class TableFormat { kCsv, kMarkdown };

inline std::string format_db(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string method_label(const std::string& m) {
  std::string out = m;
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

/// Rows are b ascending with "max" last, columns are methods, cells hold the
/// best-mask mean PSNR with 2 decimals. The CSV variant puts metadata and the
/// table in '#' comment lines followed by the per-record dump:
///   image_id,b,mask_index,method,psnr_db
inline std::string emit_table(const BenchReport& report, TableFormat format) {
  const auto methods = report_methods(report);
  const auto block_sizes = report_block_sizes(report);
  if (methods.empty() || report.records.empty()) {
    throw std::invalid_argument("emit_table: report has no records");
  }
  auto cell_text = [&](BlockSize b, const std::string& m, bool best) {
    const CellSummary* c = report.cell(b, m);
    if (c == nullptr) return std::string("-");
    return format_db(best ? c->best_db : c->worst_db, 2);
  };

  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    for (const auto& [k, v] : report.metadata) out << "# " << k << ": " << v << "\n";
    for (const auto& e : report.errors) out << "# error: " << e << "\n";
    out << "# table: b";
    for (const auto& m : methods) out << "," << m;
    out << "\n";
    for (BlockSize b : block_sizes) {
      out << "# table: " << b.str();
      for (const auto& m : methods) out << "," << cell_text(b, m, true);
      out << "\n";
    }
    out << "image_id,b,mask_index,method,psnr_db\n";
    for (const auto& r : report.records) {
      out << detail::csv_escape(r.image_id) << "," << r.b.str() << ","
          << r.mask_index << "," << detail::csv_escape(r.method) << ","
          << format_double(r.psnr_db) << "\n";
    }
    return out.str();
  }

  auto table = [&](const std::string& title, bool best) {
    out << "### " << title << "\n\n|          |";
    for (const auto& m : methods) out << " " << detail::method_label(m) << " |";
    out << "\n|----------|";
    for (std::size_t i = 0; i < methods.size(); ++i) out << "------:|";
    out << "\n";
    for (BlockSize b : block_sizes) {
      out << "| b=" << b.str() << std::string(b.str().size() < 7 ? 7 - b.str().size() : 0, ' ')
          << "|";
      for (const auto& m : methods) out << " " << cell_text(b, m, best) << " |";
      out << "\n";
    }
    out << "\n";
  };
  table("PSNR in dB, best mask (mean over images)", true);
  table("PSNR in dB, worst mask (mean over images)", false);
  if (!report.errors.empty()) {
    out << "Errors:\n\n";
    for (const auto& e : report.errors) out << "- " << e << "\n";
    out << "\n";
  }
  out << "Configuration:\n\n";
  for (const auto& [k, v] : report.metadata) out << "- " << k << ": " << v << "\n";
  return out.str();
}

/// Reads the CSV written by emit_table and recomputes the aggregates.
inline BenchReport parse_bench_csv(std::string_view text) {
  BenchReport report;
  bool header_seen = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto body = trim(line.substr(1));
      auto colon = body.find(": ");
      if (colon == std::string_view::npos) continue;
      std::string key(body.substr(0, colon));
      std::string value(body.substr(colon + 2));
      if (key == "table") continue;
      if (key == "error") {
        report.errors.push_back(value);
      } else {
        report.metadata.emplace_back(key, value);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "image_id,b,mask_index,method,psnr_db") {
        throw std::invalid_argument("bench CSV: unexpected header on line " +
                                    std::to_string(line_no));
      }
      header_seen = true;
      continue;
    }
    // Fields may be quoted; split honoring quotes.
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 5) {
      throw std::invalid_argument("bench CSV: line " + std::to_string(line_no) +
                                  " does not have 5 fields");
    }
    BenchRecord r;
    r.image_id = fields[0];
    r.b = BlockSize::parse(fields[1]);
    r.mask_index = parse_number<int>("mask_index", fields[2]);
    r.method = fields[3];
    r.psnr_db = parse_number<double>("psnr_db", fields[4]);
    report.records.push_back(std::move(r));
  }
  if (!header_seen) throw std::invalid_argument("bench CSV: missing header");
  compute_aggregates(report);
  return report;
}

}  // namespace nrsample

#endif  // NRSAMPLE_BENCH_HPP
