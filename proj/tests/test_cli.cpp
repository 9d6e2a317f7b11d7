#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nrsample/bench.hpp"
#include "support.hpp"

using namespace nrsample;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Run run_cli(const std::string& args, const fs::path& cwd) {
  const auto out_file = cwd / "stdout.txt";
  const auto err_file = cwd / "stderr.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" + NRSAMPLE_CLI_PATH + "' " + args +
                          " > '" + out_file.string() + "' 2> '" + err_file.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string camera() { return std::string(NRSAMPLE_DATA_DIR) + "/images/camera.png"; }

GrayImage crop(const GrayImage& img, int size) {
  GrayImage out(size, size);
  for (int m = 0; m < size; ++m) {
    for (int n = 0; n < size; ++n) out(m, n) = img(200 + m, 200 + n);
  }
  return out;
}

double printed_psnr(const std::string& out) {
  const std::string key = "psnr_db: ";
  auto pos = out.find(key);
  if (pos == std::string::npos) return std::nan("");
  auto end = out.find('\n', pos);
  return parse_number<double>("psnr_db", out.substr(pos + key.size(), end - pos - key.size()));
}

}  // namespace

TEST(Cli, Version) {
  auto dir = testing_support::temp_dir("cli_version");
  auto r = run_cli("--version", dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, std::string("nrsample ") + NRSAMPLE_VERSION + "\n");
}

TEST(Cli, MaskGenRegular) {
  auto dir = testing_support::temp_dir("cli_maskgen");
  auto r = run_cli("mask-gen --b 2 --seed 0 --width 4 --height 4", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  auto path = dir / "mask_b2_s0_4x4.pgm";
  ASSERT_TRUE(fs::exists(path));
  auto mask = read_mask_pgm(path.string());
  EXPECT_EQ(mask, tile(generate_template(2, 0), 4, 4));
  EXPECT_EQ(mask.rows(), 4);
}

TEST(Cli, MaskGenTemplateAndInspect) {
  auto dir = testing_support::temp_dir("cli_qtpl");
  ASSERT_EQ(run_cli("mask-gen --b 8 --seed 5 --width 8 --height 8 --out t.qtpl", dir).code, 0);
  EXPECT_EQ(read_template_file((dir / "t.qtpl").string()), generate_template(8, 5));
  ASSERT_EQ(run_cli("mask-gen --b max --seed 5 --width 64 --height 32 --out m.pgm", dir).code, 0);
  auto mask = read_mask_pgm((dir / "m.pgm").string());
  EXPECT_EQ(mask, generate_full_sensor_mask(32, 64, 5));
  auto r = run_cli("mask-inspect m.pgm --superpixels --clumps", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  auto diag = diagnose(mask);
  EXPECT_NE(r.out.find("size: 64x32\n"), std::string::npos);
  EXPECT_NE(r.out.find("density: 0.25\n"), std::string::npos);
  EXPECT_NE(r.out.find("superpixels: " + std::to_string(diag.superpixels.size()) + "\n"),
            std::string::npos);
  EXPECT_NE(r.out.find("clump_score: " + std::to_string(diag.clump_score) + "\n"),
            std::string::npos);
  r = run_cli("mask-gen --b max --width 8 --height 8 --out t2.qtpl", dir);
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, MaskSpectrum) {
  auto dir = testing_support::temp_dir("cli_spectrum");
  ASSERT_EQ(run_cli("mask-gen --b 2 --seed 0 --width 16 --height 16 --out r.pgm", dir).code, 0);
  auto r = run_cli("mask-spectrum r.pgm --out s.pgm --peaks 4", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aliasing_ratio: 1"), std::string::npos) << r.out;
  auto px = read_pgm((dir / "s.pgm").string());
  EXPECT_EQ(px(0, 0), 255.0);
  EXPECT_EQ(px(8, 8), 255.0);
  EXPECT_EQ(px(1, 3), 0.0);
}

TEST(Cli, UsageErrorsExitOne) {
  auto dir = testing_support::temp_dir("cli_usage");
  for (const char* args : {"", "frobnicate", "mask-gen --b 2 --width 4", "mask-gen --bogus 1",
                           "reconstruct x.pgm --mask m.pgm --method skr --out y.pgm"}) {
    auto r = run_cli(args, dir);
    EXPECT_EQ(r.code, 1) << args;
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << args << ": " << r.err;
  }
}

TEST(Cli, RuntimeErrorsExitTwo) {
  auto dir = testing_support::temp_dir("cli_runtime");
  write_image(testing_support::random_image(8, 8, 1), (dir / "img.pgm").string());
  write_mask_pgm(generate_full_sensor_mask(8, 10, 1), (dir / "m.pgm").string());
  auto r = run_cli("reconstruct img.pgm --mask m.pgm --method lin --out out.pgm", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("dimension"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  r = run_cli("acquire missing.png --mode lr --out x.pgm", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  r = run_cli("mask-gen --b 3 --width 4 --height 4", dir);
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, RoundTripMatchesLibraryBitExactly) {
  auto dir = testing_support::temp_dir("cli_roundtrip");
  const GrayImage hr = crop(read_image(camera()), 64);
  write_image(hr, (dir / "hr.pgm").string());
  ASSERT_EQ(run_cli("mask-gen --b 8 --seed 77 --width 64 --height 64 --out m.pgm", dir).code, 0);
  ASSERT_EQ(run_cli("acquire hr.pgm --mask m.pgm --mode masked --out masked.pgm", dir).code, 0);
  auto r = run_cli(
      "reconstruct masked.pgm --mask m.pgm --method fse --out rec.pgm --reference hr.pgm", dir);
  ASSERT_EQ(r.code, 0) << r.err;

  const auto mask = tile(generate_template(8, 77), 64, 64);
  const auto lib = reconstruct_fse(acquire_masked(hr, mask), FseConfig{}).image;
  EXPECT_EQ(printed_psnr(r.out), psnr(hr, lib));
  auto written = read_pgm((dir / "rec.pgm").string());
  for (int i = 0; i < 64 * 64; ++i) {
    EXPECT_EQ(written.values()[i], quantize_u8(lib.values()[i]));
  }

  r = run_cli("reconstruct masked.pgm --mask m.pgm --method lin --out lin.pgm --reference hr.pgm",
              dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(printed_psnr(r.out), psnr(hr, reconstruct_lin(acquire_masked(hr, mask)).image));
}

TEST(Cli, ConfigFileAndFlagOverrides) {
  auto dir = testing_support::temp_dir("cli_config");
  const GrayImage hr = crop(read_image(camera()), 32);
  write_image(hr, (dir / "hr.pgm").string());
  const auto mask = generate_full_sensor_mask(32, 32, 3);
  write_mask_pgm(mask, (dir / "m.pgm").string());
  write_image(acquire_masked(hr, mask).image, (dir / "masked.pgm").string());
  std::ofstream(dir / "fse.cfg") << "iterations = 30\nrho = 0.8\ngamma = 0.7\n";
  auto r = run_cli("reconstruct masked.pgm --mask m.pgm --method fse --config fse.cfg "
                   "--gamma 0.4 --use-reconstructed false --out rec.pgm --reference hr.pgm",
                   dir);
  ASSERT_EQ(r.code, 0) << r.err;
  FseConfig cfg;
  cfg.iterations = 30;
  cfg.rho = 0.8;
  cfg.gamma = 0.4;
  cfg.use_reconstructed = false;
  EXPECT_EQ(printed_psnr(r.out), psnr(hr, reconstruct_fse(acquire_masked(hr, mask), cfg).image));
  std::ofstream(dir / "bad.cfg") << "rho = 2\n";
  EXPECT_EQ(run_cli("reconstruct masked.pgm --mask m.pgm --method fse --config bad.cfg --out x.pgm",
                    dir).code,
            2);
}

TEST(Cli, AcquireLr) {
  auto dir = testing_support::temp_dir("cli_lr");
  GrayImage hr(4, 4, 10.0);
  hr(0, 0) = 50.0;
  write_image(hr, (dir / "hr.pgm").string());
  ASSERT_EQ(run_cli("acquire hr.pgm --mode lr --out lr.pgm", dir).code, 0);
  auto lr = read_pgm((dir / "lr.pgm").string());
  ASSERT_EQ(lr.rows(), 2);
  EXPECT_EQ(lr(0, 0), 20.0);
  EXPECT_EQ(lr(1, 1), 10.0);
  EXPECT_EQ(run_cli("acquire hr.pgm --mode masked --out x.pgm", dir).code, 2);
  EXPECT_EQ(run_cli("acquire hr.pgm --mode sideways --out x.pgm", dir).code, 1);
}

TEST(Cli, BenchAndReport) {
  auto dir = testing_support::temp_dir("cli_bench");
  fs::create_directories(dir / "imgs");
  write_image(crop(read_image(camera()), 32), (dir / "imgs" / "cam.pgm").string());
  write_image(testing_support::random_image(32, 32, 4), (dir / "imgs" / "noise.png").string());
  std::ofstream(dir / "tiny.bench") << "image_dir = imgs\nblock_sizes = 2,4,max\nmasks_per_b = 2\n"
                                       "methods = fse,lin\nmaster_seed = 3\nfse.iterations = 20\n";
  auto r = run_cli("bench --spec tiny.bench --out-dir out --quiet", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir / "out" / "report.csv");
  const auto md = slurp(dir / "out" / "report.md");
  EXPECT_NE(csv.find("image_id,b,mask_index,method,psnr_db\ncam.pgm,2,0,fse,"), std::string::npos);
  EXPECT_NE(csv.find(std::string("# version: ") + NRSAMPLE_VERSION), std::string::npos);

  // Same spec through the library gives the same bytes.
  auto spec = load_bench_spec((dir / "tiny.bench").string());
  EXPECT_EQ(emit_table(run_benchmark(spec), TableFormat::kCsv), csv);

  r = run_cli("bench --spec tiny.bench --out-dir out2 --jobs 2 --quiet", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "out2" / "report.csv"), csv);

  r = run_cli("report out/report.csv --format csv", dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, csv);
  r = run_cli("report out/report.csv", dir);
  EXPECT_EQ(r.out, md);
  EXPECT_EQ(run_cli("report missing.csv", dir).code, 2);
  EXPECT_EQ(run_cli("bench --spec missing.bench --out-dir o", dir).code, 2);
}
