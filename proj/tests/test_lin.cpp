#include <gtest/gtest.h>

#include "nrsample/errors.hpp"
#include "nrsample/lin.hpp"
#include "nrsample/sensor.hpp"

#include "lin_oracle.hpp"
#include "support.hpp"

using namespace nrsample;

using namespace lin_oracle;

TEST(Delaunay, EmptyCircumcirclesAndFullCover) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto mask = generate_full_sensor_mask(16, 12, seed);
    auto pts = open_positions(mask);
    auto tri = delaunay_triangulate(pts);
    std::int64_t area = 0;
    for (const auto& t : tri.triangles) {
      const auto a2 = cross(pts[t[0]], pts[t[1]], pts[t[2]]);
      EXPECT_GT(a2, 0);
      area += a2;
      for (std::size_t d = 0; d < pts.size(); ++d) {
        EXPECT_LE(incircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[d]), 0);
      }
    }
    EXPECT_EQ(area, hull_area2(hull(pts)));
  }
}

TEST(Delaunay, CocircularGridIsFannedFromLowestIndex) {
  // A regular lattice is all cocircular squares.
  auto pts = open_positions(tile(QuadrantTemplate(2, Grid<std::uint8_t>(1, 1, 0)), 6, 6));
  auto tri = delaunay_triangulate(pts);
  EXPECT_EQ(tri.triangles.size(), 8u);
  auto expected = brute_delaunay(pts);
  auto normalize = [](std::vector<std::array<int, 3>> v) {
    for (auto& t : v) std::sort(t.begin(), t.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(normalize(tri.triangles), normalize(expected));
}

TEST(Delaunay, MatchesBruteForceFaces) {
  auto normalize = [](std::vector<std::array<int, 3>> v) {
    for (auto& t : v) std::sort(t.begin(), t.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto mask = seed % 3 ? generate_full_sensor_mask(8, 8, seed)
                         : tile(generate_template(4, seed), 8, 8);
    auto pts = open_positions(mask);
    EXPECT_EQ(normalize(delaunay_triangulate(pts).triangles), normalize(brute_delaunay(pts)))
        << "seed " << seed;
  }
}

TEST(Lin, AffineImagesExactInsideHull) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = coef(rng), b = coef(rng), c = 100.0 + 20.0 * coef(rng);
    GrayImage hr(24, 20);
    for (int m = 0; m < 24; ++m) {
      for (int n = 0; n < 20; ++n) hr(m, n) = a * m + b * n + c;
    }
    auto mask = trial % 2 ? generate_full_sensor_mask(24, 20, trial)
                          : tile(generate_template(8, trial), 24, 20);
    auto out = reconstruct_lin(acquire_masked(hr, mask)).image;
    auto h = hull(open_positions(mask));
    for (int m = 0; m < 24; ++m) {
      for (int n = 0; n < 20; ++n) {
        if (inside_hull(h, {m, n})) { EXPECT_NEAR(out(m, n), hr(m, n), 1e-9); }
      }
    }
  }
}

TEST(Lin, MatchesBruteForceBarycentricOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto hr = testing_support::random_image(8, 8, seed);
    auto mask = generate_full_sensor_mask(8, 8, seed + 1000);
    auto out = reconstruct_lin(acquire_masked(hr, mask)).image;
    auto expected = expected_lin(hr, mask);
    for (int m = 0; m < 8; ++m) {
      for (int n = 0; n < 8; ++n) {
        EXPECT_NEAR(out(m, n), expected(m, n), 1e-9) << "seed " << seed << " at " << m << "," << n;
      }
    }
  }
}

TEST(Lin, ConstantImageStaysConstant) {
  GrayImage hr(20, 26, 77.0);
  auto out = reconstruct_lin(acquire_masked(hr, generate_full_sensor_mask(20, 26, 4))).image;
  for (double v : out.values()) EXPECT_EQ(v, 77.0);
}

TEST(Lin, KnownPixelsPreserved) {
  auto hr = testing_support::random_image(32, 32, 6);
  for (auto& v : hr.values()) v += 0.3;
  auto mask = tile(generate_template(16, 2), 32, 32);
  auto out = reconstruct_lin(acquire_masked(hr, mask)).image;
  for (int m = 0; m < 32; ++m) {
    for (int n = 0; n < 32; ++n) {
      if (mask.is_open(m, n)) { EXPECT_EQ(out(m, n), hr(m, n)); }
    }
  }
}

TEST(Lin, DegenerateInputs) {
  // 2x2: one sample. 2x6 with quadrant 0 everywhere: three collinear samples.
  EXPECT_THROW(reconstruct_lin(acquire_masked(GrayImage(2, 2, 1.0), generate_full_sensor_mask(2, 2, 0))),
               DegenerateInput);
  auto row = tile(QuadrantTemplate(2, Grid<std::uint8_t>(1, 1, 0)), 2, 6);
  EXPECT_THROW(reconstruct_lin(acquire_masked(GrayImage(2, 6, 1.0), row)), DegenerateInput);
  GrayImage bad(4, 4, 1.0);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(reconstruct_lin(MaskedImage{bad, generate_full_sensor_mask(4, 4, 0)}), InvalidInput);
}
