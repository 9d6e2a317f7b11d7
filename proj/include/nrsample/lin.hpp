#ifndef NRSAMPLE_LIN_HPP
#define NRSAMPLE_LIN_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/polygon/voronoi.hpp>

#include "nrsample/errors.hpp"
#include "nrsample/fse.hpp"
#include "nrsample/image.hpp"
#include "nrsample/mask.hpp"
#include "nrsample/sensor.hpp"

namespace nrsample {

/// Delaunay triangulation of integer sample positions. Triangles index into
/// `points` and are counter-clockwise in (col, row) coordinates.
struct Triangulation {
  std::vector<PixelPos> points;
  std::vector<std::array<int, 3>> triangles;
};

namespace detail {

// Twice the signed area of (a, b, c) with x = col, y = row. Exact.
inline std::int64_t orient(const PixelPos& a, const PixelPos& b,
                           const PixelPos& c) {
  return static_cast<std::int64_t>(b.col - a.col) * (c.row - a.row) -
         static_cast<std::int64_t>(b.row - a.row) * (c.col - a.col);
}

}  // namespace detail

/// Built as the dual of the Voronoi diagram (Boost.Polygon, exact integer
/// predicates). Cocircular groups of sites come back as a single Voronoi
/// vertex of degree > 3; that convex face is fanned from its lowest-index
/// site, so the result is deterministic.
inline Triangulation delaunay_triangulate(std::vector<PixelPos> points) {
  namespace bp = boost::polygon;
  Triangulation tri;
  tri.points = std::move(points);
  if (tri.points.size() < 3) return tri;

  std::vector<bp::point_data<int>> sites;
  sites.reserve(tri.points.size());
  for (const auto& p : tri.points) sites.emplace_back(p.col, p.row);
  bp::voronoi_diagram<double> vd;
  bp::construct_voronoi(sites.begin(), sites.end(), &vd);

  std::vector<int> ring;
  for (const auto& vertex : vd.vertices()) {
    ring.clear();
    const auto* edge = vertex.incident_edge();
    do {
      ring.push_back(static_cast<int>(edge->cell()->source_index()));
      edge = edge->rot_next();
    } while (edge != vertex.incident_edge());
    if (ring.size() < 3) continue;
    std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()),
                ring.end());
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
      std::array<int, 3> t{ring[0], ring[i], ring[i + 1]};
      auto area = detail::orient(tri.points[t[0]], tri.points[t[1]],
                                 tri.points[t[2]]);
      if (area == 0) continue;
      if (area < 0) std::swap(t[1], t[2]);
      tri.triangles.push_back(t);
    }
  }
  return tri;
}

/// Scattered linear interpolation over the Delaunay triangulation of the
/// sampled pixels. Pixels outside the convex hull take the value of the
/// nearest sample (Euclidean, ties to the first in row-major order).
inline ReconResult reconstruct_lin(const MaskedImage& input) {
  require_finite(input.image, "reconstruct_lin");
  if (!input.image.same_shape(input.mask.bits())) {
    throw std::invalid_argument("reconstruct_lin: image/mask dimension mismatch");
  }
  const int M = input.image.rows();
  const int N = input.image.cols();

  std::vector<PixelPos> samples;
  samples.reserve(input.mask.open_count());
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      if (input.mask.is_open(m, n)) samples.push_back({m, n});
    }
  }
  if (samples.size() < 3) {
    throw DegenerateInput("reconstruct_lin: fewer than 3 samples");
  }
  const Triangulation tri = delaunay_triangulate(samples);
  if (tri.triangles.empty()) {
    throw DegenerateInput("reconstruct_lin: all samples are collinear");
  }

  GrayImage out = input.image;
  Grid<std::uint8_t> done(M, N, 0);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) done(m, n) = input.mask.is_open(m, n) ? 1 : 0;
  }

  for (const auto& t : tri.triangles) {
    const PixelPos& a = tri.points[t[0]];
    const PixelPos& b = tri.points[t[1]];
    const PixelPos& c = tri.points[t[2]];
    const double va = input.image(a.row, a.col);
    const double vb = input.image(b.row, b.col);
    const double vc = input.image(c.row, c.col);
    const double area = static_cast<double>(detail::orient(a, b, c));
    const int r0 = std::min({a.row, b.row, c.row});
    const int r1 = std::max({a.row, b.row, c.row});
    const int c0 = std::min({a.col, b.col, c.col});
    const int c1 = std::max({a.col, b.col, c.col});
    for (int m = r0; m <= r1; ++m) {
      for (int n = c0; n <= c1; ++n) {
        if (done(m, n)) continue;
        const PixelPos p{m, n};
        const auto la = detail::orient(p, b, c);
        const auto lb = detail::orient(a, p, c);
        const auto lc = detail::orient(a, b, p);
        if (la < 0 || lb < 0 || lc < 0) continue;
        out(m, n) = (static_cast<double>(la) * va + static_cast<double>(lb) * vb +
                     static_cast<double>(lc) * vc) /
                    area;
        done(m, n) = 1;
      }
    }
  }

  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      if (done(m, n)) continue;
      // Every 2x2 cell holds a sample, so the search radius stays small.
      long best_d2 = std::numeric_limits<long>::max();
      PixelPos best{};
      for (int radius = 2;; radius *= 2) {
        for (int i = std::max(0, m - radius); i <= std::min(M - 1, m + radius); ++i) {
          for (int j = std::max(0, n - radius); j <= std::min(N - 1, n + radius); ++j) {
            if (!input.mask.is_open(i, j)) continue;
            const long d2 = static_cast<long>(i - m) * (i - m) +
                            static_cast<long>(j - n) * (j - n);
            if (d2 < best_d2 || (d2 == best_d2 && PixelPos{i, j} < best)) {
              best_d2 = d2;
              best = {i, j};
            }
          }
        }
        if (best_d2 <= static_cast<long>(radius) * radius) break;
      }
      out(m, n) = input.image(best.row, best.col);
    }
  }
  return {std::move(out), "lin"};
}

}  // namespace nrsample

#endif  // NRSAMPLE_LIN_HPP
