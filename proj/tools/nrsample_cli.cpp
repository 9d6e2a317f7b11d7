// nrsample: command-line front end for mask generation, sensor simulation,
// reconstruction and benchmarking.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nrsample/bench.hpp"
#include "nrsample/config.hpp"
#include "nrsample/fse.hpp"
#include "nrsample/image_io.hpp"
#include "nrsample/lin.hpp"
#include "nrsample/mask.hpp"
#include "nrsample/psnr.hpp"
#include "nrsample/sensor.hpp"
#include "nrsample/spectrum.hpp"

namespace fs = std::filesystem;
using namespace nrsample;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

bool is_template_path(const std::string& path) {
  return detail::ends_with_ci(path, ".qtpl");
}

// A .qtpl template is tiled to the requested size (one block by default).
SamplingMask load_mask(const std::string& path, int rows = 0, int cols = 0) {
  if (!is_template_path(path)) return read_mask_pgm(path);
  const QuadrantTemplate tpl = read_template_file(path);
  const int b = tpl.block_size();
  return tile(tpl, rows > 0 ? rows : b, cols > 0 ? cols : b);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct FseFlags {
  std::optional<int> fft_size, block_size, iterations;
  std::optional<double> rho, gamma, delta, spectral_prior;
  std::optional<bool> use_reconstructed;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--fft-size", fft_size, "FSE window size F (power of two)");
    cmd->add_option("--block-size", block_size, "FSE target block size");
    cmd->add_option("--iterations", iterations, "FSE iterations per block");
    cmd->add_option("--rho", rho, "FSE spatial weight decay");
    cmd->add_option("--gamma", gamma, "FSE orthogonality deficiency compensation");
    cmd->add_option("--delta", delta, "weight of previously reconstructed pixels");
    cmd->add_option("--spectral-prior", spectral_prior,
                    "low-frequency selection prior exponent (0 = off)");
    cmd->add_option("--use-reconstructed", use_reconstructed,
                    "use reconstructed pixels as support (true/false)");
  }

  // Config file first, then flags.
  FseConfig resolve(const std::string& config_path) const {
    FseConfig cfg;
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_key_value_file(config_path)) {
        set_fse_option(cfg, k.rfind("fse.", 0) == 0 ? k.substr(4) : k, v);
      }
    }
    if (fft_size) cfg.fft_size = *fft_size;
    if (block_size) cfg.block_size = *block_size;
    if (iterations) cfg.iterations = *iterations;
    if (rho) cfg.rho = *rho;
    if (gamma) cfg.gamma = *gamma;
    if (delta) cfg.delta = *delta;
    if (spectral_prior) cfg.spectral_prior = *spectral_prior;
    if (use_reconstructed) cfg.use_reconstructed = *use_reconstructed;
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-regular 1/4 sampling masks, sensor simulation and reconstruction",
               "nrsample"};
  app.set_version_flag("--version", std::string("nrsample ") + kVersion);
  app.require_subcommand(1);

  // mask-gen
  auto* gen = app.add_subcommand("mask-gen", "generate a sampling mask or template");
  std::string gen_b;
  int gen_width = 0, gen_height = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--b", gen_b, "block size: even integer or 'max'")->required();
  gen->add_option("--width", gen_width, "sensor width in HR pixels")->required();
  gen->add_option("--height", gen_height, "sensor height in HR pixels")->required();
  gen->add_option("--seed", gen_seed, "64-bit seed");
  gen->add_option("--out", gen_out,
                  "output: .qtpl writes the template, anything else a PGM mask");

  // mask-inspect
  auto* inspect = app.add_subcommand("mask-inspect", "print mask diagnostics");
  std::string inspect_path;
  bool inspect_super = false, inspect_clumps = false;
  int inspect_width = 0, inspect_height = 0;
  inspect->add_option("mask", inspect_path, "mask PGM or .qtpl template")->required();
  inspect->add_flag("--superpixels", inspect_super, "list superpixel positions");
  inspect->add_flag("--clumps", inspect_clumps, "print the clump score");
  inspect->add_option("--width", inspect_width, "tile a template to this width");
  inspect->add_option("--height", inspect_height, "tile a template to this height");

  // mask-spectrum
  auto* spectrum = app.add_subcommand("mask-spectrum", "write the mask amplitude spectrum");
  std::string spectrum_path, spectrum_out;
  int spectrum_peaks = 0;
  spectrum->add_option("mask", spectrum_path, "mask PGM or .qtpl template")->required();
  spectrum->add_option("--out", spectrum_out, "log-scaled spectrum PGM")->required();
  spectrum->add_option("--peaks", spectrum_peaks, "also print the N largest peaks");

  // acquire
  auto* acquire = app.add_subcommand("acquire", "simulate sensor acquisition");
  std::string acquire_image, acquire_mask, acquire_mode, acquire_out;
  acquire->add_option("image", acquire_image, "HR image (PGM or PNG)")->required();
  acquire->add_option("--mask", acquire_mask, "mask PGM or .qtpl template (masked mode)");
  acquire->add_option("--mode", acquire_mode, "lr or masked")
      ->required()
      ->check(CLI::IsMember({"lr", "masked"}));
  acquire->add_option("--out", acquire_out, "output image")->required();

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "reconstruct a masked image");
  std::string recon_input, recon_mask, recon_method, recon_config, recon_out,
      recon_reference;
  FseFlags fse_flags;
  recon->add_option("masked-image", recon_input, "masked image (PGM or PNG)")->required();
  recon->add_option("--mask", recon_mask, "mask PGM or .qtpl template")->required();
  recon->add_option("--method", recon_method, "fse or lin")
      ->required()
      ->check(CLI::IsMember({"fse", "lin"}));
  recon->add_option("--config", recon_config, "FSE key=value config file");
  recon->add_option("--out", recon_out, "reconstructed image")->required();
  recon->add_option("--reference", recon_reference,
                    "ground truth; prints psnr_db of the unquantized result");
  fse_flags.add_to(recon);

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark protocol");
  std::string bench_spec, bench_out_dir;
  std::optional<int> bench_jobs;
  bool bench_quiet = false;
  bench->add_option("--spec", bench_spec, "bench spec file")->required();
  bench->add_option("--out-dir", bench_out_dir, "directory for report.csv and report.md")
      ->required();
  bench->add_option("--jobs", bench_jobs, "worker threads (overrides the spec)");
  bench->add_flag("--quiet", bench_quiet, "no progress output");

  // report
  auto* report = app.add_subcommand("report", "re-render a bench CSV");
  std::string report_csv, report_format = "markdown", report_out;
  report->add_option("csv", report_csv, "report.csv from bench")->required();
  report->add_option("--format", report_format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));
  report->add_option("--out", report_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) {
      const BlockSize b = BlockSize::parse(gen_b);
      if (is_template_path(gen_out)) {
        if (b.is_max()) throw std::invalid_argument("b=max has no template; use a .pgm output");
        write_template_file(generate_template(b.value(), gen_seed), gen_out);
      } else {
        const SamplingMask mask =
            b.is_max() ? generate_full_sensor_mask(gen_height, gen_width, gen_seed)
                       : tile(generate_template(b.value(), gen_seed), gen_height, gen_width);
        if (gen_out.empty()) {
          gen_out = "mask_b" + b.str() + "_s" + std::to_string(gen_seed) + "_" +
                    std::to_string(gen_width) + "x" + std::to_string(gen_height) + ".pgm";
        }
        write_mask_pgm(mask, gen_out);
      }
      std::cout << gen_out << "\n";
    } else if (*inspect) {
      const SamplingMask mask = load_mask(inspect_path, inspect_height, inspect_width);
      const MaskDiagnostics diag = diagnose(mask);
      const bool all = !inspect_super && !inspect_clumps;
      std::cout << "size: " << mask.cols() << "x" << mask.rows() << "\n"
                << "period: " << mask.period().str() << "\n"
                << "open: " << mask.open_count() << "\n"
                << "density: " << format_double(diag.density) << "\n";
      if (all || inspect_super) {
        std::cout << "superpixels: " << diag.superpixels.size() << "\n";
      }
      if (inspect_super) {
        for (const auto& p : diag.superpixels) {
          std::cout << "superpixel: " << p.row << " " << p.col << "\n";
        }
      }
      if (all || inspect_clumps) std::cout << "clump_score: " << diag.clump_score << "\n";
    } else if (*spectrum) {
      const SamplingMask mask = load_mask(spectrum_path);
      const Spectrum spec = amplitude_spectrum(mask);
      write_pgm_u8(spectrum_to_u8(spec), spectrum_out);
      std::cout << "aliasing_ratio: " << format_double(aliasing_ratio(spec)) << "\n";
      if (spectrum_peaks > 0) {
        for (const auto& p : dominant_peaks(spec, spectrum_peaks)) {
          std::cout << "peak: " << p.k << " " << p.l << " " << format_double(p.magnitude)
                    << "\n";
        }
      }
    } else if (*acquire) {
      const GrayImage hr = read_image(acquire_image);
      if (acquire_mode == "lr") {
        write_image(acquire_lr(hr), acquire_out);
      } else {
        if (acquire_mask.empty()) throw std::invalid_argument("masked mode needs --mask");
        const SamplingMask mask = load_mask(acquire_mask, hr.rows(), hr.cols());
        write_image(acquire_masked(hr, mask).image, acquire_out);
      }
    } else if (*recon) {
      const FseConfig cfg = fse_flags.resolve(recon_config);
      const GrayImage observed = read_image(recon_input);
      const SamplingMask mask = load_mask(recon_mask, observed.rows(), observed.cols());
      const MaskedImage input = acquire_masked(observed, mask);
      const ReconResult result =
          recon_method == "fse" ? reconstruct_fse(input, cfg) : reconstruct_lin(input);
      write_image(result.image, recon_out);
      if (!recon_reference.empty()) {
        std::cout << "psnr_db: " << format_double(psnr(read_image(recon_reference), result.image))
                  << "\n";
      }
    } else if (*bench) {
      BenchSpec spec = load_bench_spec(bench_spec);
      if (bench_jobs) spec.jobs = *bench_jobs;
      std::function<void(const std::string&)> log;
      if (!bench_quiet) log = [](const std::string& line) { std::cerr << line << "\n"; };
      const BenchReport result = run_benchmark(spec, nullptr, log);
      fs::create_directories(bench_out_dir);
      const std::string csv = (fs::path(bench_out_dir) / "report.csv").string();
      const std::string md = (fs::path(bench_out_dir) / "report.md").string();
      write_text(csv, emit_table(result, TableFormat::kCsv));
      write_text(md, emit_table(result, TableFormat::kMarkdown));
      for (const auto& e : result.errors) std::cerr << "warning: " << e << "\n";
      std::cout << csv << "\n" << md << "\n";
    } else if (*report) {
      const BenchReport parsed = parse_bench_csv(read_text(report_csv));
      const std::string text = emit_table(
          parsed, report_format == "csv" ? TableFormat::kCsv : TableFormat::kMarkdown);
      if (report_out.empty()) {
        std::cout << text;
      } else {
        write_text(report_out, text);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
