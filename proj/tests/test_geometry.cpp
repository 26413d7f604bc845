#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geocake/geometry.hpp"

using namespace geocake;

namespace {

Raster disc_raster(double r, double h) {
  const int n = static_cast<int>(std::ceil(2 * r / h)) + 2;
  Raster out = Raster::blank({-n * h / 2, -n * h / 2}, h, n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point c = out.cell_center(i, j);
      out.set(i, j, c.x * c.x + c.y * c.y <= r * r);
    }
  }
  return out;
}

// Largest aligned square by trying every corner and side.
int brute_square(const Raster& r) {
  int best = 0;
  for (int j = 0; j < r.ny; ++j) {
    for (int i = 0; i < r.nx; ++i) {
      for (int s = best + 1; i + s <= r.nx && j + s <= r.ny; ++s) {
        bool ok = true;
        for (int b = j; b < j + s && ok; ++b) {
          for (int a = i; a < i + s && ok; ++a) ok = r.at(a, b);
        }
        if (!ok) break;
        best = s;
      }
    }
  }
  return best;
}

bool sample_in(const Region& reg, Point p) {
  for (const auto& b : reg.boxes()) {
    if (p.x >= b.xmin && p.x < b.xmax && p.y >= b.ymin && p.y < b.ymax) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("box fatness is exact") {
  auto unit = fatness(Region::box({0, 0, 1, 1}));
  CHECK(unit.ratio == 1.0);
  CHECK(unit.error_bound == 0.0);
  auto wide = fatness(Region::box({0, 0, 3, 1}));
  CHECK(wide.ratio == 3.0);
  CHECK(wide.s_in == 1.0);
  CHECK(wide.s_out == 3.0);
}

TEST_CASE("empty region has no fatness") {
  CHECK_THROWS_WITH(fatness(Region{}), "empty region has no fatness");
}

TEST_CASE("L-shape fatness uses the largest inner square") {
  auto l = Region::rectilinear({{0, 0, 3, 1}, {0, 1, 1, 3}});
  auto f = fatness(l);
  CHECK(f.s_in == doctest::Approx(1.0));
  CHECK(f.s_out == doctest::Approx(3.0));
  auto fat_l = Region::rectilinear({{0, 0, 4, 2}, {0, 2, 2, 4}});
  CHECK(fatness(fat_l).ratio == doctest::Approx(2.0));
}

TEST_CASE("fatness is invariant under translation and scaling") {
  auto l = Region::rectilinear({{0, 0, 5, 1.5}, {0, 1.5, 2, 4}});
  auto moved = Region::rectilinear({{10, -3, 10 + 10, -3 + 3}, {10, 0, 14, 5}});
  CHECK(fatness(l).ratio == doctest::Approx(fatness(moved).ratio));
}

TEST_CASE("raster disc is sqrt2 fat within its error bound") {
  const double r = 1.0;
  auto f = fatness(Region::raster(disc_raster(r, r / 64)));
  CHECK(std::abs(f.ratio - std::numbers::sqrt2) <= f.error_bound);
  CHECK(f.error_bound > 0);
}

TEST_CASE("raster square DP matches brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 57);
    Raster r = Raster::blank({0, 0}, 1.0, n, n);
    std::bernoulli_distribution on(trial % 2 ? 0.9 : 0.75);
    for (auto& c : r.cells) c = on(rng) ? 1 : 0;
    if (r.count() == 0) continue;
    const auto side = square_side_table(r);
    int best = 0;
    for (int s : side) best = std::max(best, s);
    CHECK(best == brute_square(r));
  }
}

TEST_CASE("convex polygon inscribed square") {
  auto diamond = Region::polygon({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  auto f = fatness(diamond);
  CHECK(f.s_in == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.ratio == doctest::Approx(2.0).epsilon(1e-9));
  auto sq = Region::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  CHECK(fatness(sq).ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dilate scales about the anchor") {
  Box unit{0, 0, 1, 1};
  CHECK(dilate(unit, 1.0, {0.3, 0.8}) == unit);
  CHECK(dilate(unit, 0.5, {0, 0}) == Box{0, 0, 0.5, 0.5});
  auto d = dilate(unit, 2.0, {0.5, 0.5});
  CHECK(d.width() == doctest::Approx(2.0));
  CHECK_THROWS(dilate(unit, -1.0, {0, 0}));
}

TEST_CASE("clip_halfplane splits the unit square") {
  ConvexPoly sq{box_polygon({0, 0, 1, 1})};
  auto s = clip_halfplane(sq, {0.5, 0}, std::numbers::pi / 2);
  CHECK(s.left.area() == doctest::Approx(0.5));
  CHECK(s.right.area() == doctest::Approx(0.5));
  CHECK(s.left.bounds().xmax == doctest::Approx(0.5));
  auto flipped = clip_halfplane(sq, {0.5, 0}, 3 * std::numbers::pi / 2);
  CHECK(flipped.right.bounds().xmax == doctest::Approx(0.5));
  auto miss = clip_halfplane(sq, {5, 0}, std::numbers::pi / 2);
  CHECK(miss.right.is_empty());
  CHECK(miss.left.area() == doctest::Approx(1.0));
}

TEST_CASE("halfplane through centroid of symmetric polygon halves it") {
  auto ell = regular_polygon({0.2, -0.1}, 2.0, 1.0, 64);
  for (double th = 0; th < std::numbers::pi; th += 0.37) {
    auto s = clip_halfplane(ell, {0.2, -0.1}, th);
    CHECK(s.left.area() == doctest::Approx(s.right.area()).epsilon(1e-12));
  }
}

TEST_CASE("halfplane area is continuous in the angle") {
  auto ell = regular_polygon({0, 0}, 2.0, 1.0, 64);
  const double total = polygon_area(ell.vertices);
  double prev = clip_halfplane(ell, {0.3, 0.2}, 0).left.area();
  const int steps = 2000;
  double worst = 0;
  for (int k = 1; k <= steps; ++k) {
    const double th = 2 * std::numbers::pi * k / steps;
    const double a = clip_halfplane(ell, {0.3, 0.2}, th).left.area();
    worst = std::max(worst, std::abs(a - prev));
    prev = a;
  }
  // Modulus: a rotation by dθ sweeps at most diam² dθ / 2 of area.
  CHECK(worst <= 16.0 * (2 * std::numbers::pi / steps) / 2 + 1e-12);
  CHECK(worst < total);
}

TEST_CASE("box boolean operations agree with point sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 4);
  auto rand_box = [&] {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    return Box{std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d)};
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto a = Region::rectilinear({rand_box(), rand_box(), rand_box()});
    auto b = Region::rectilinear({rand_box(), rand_box()});
    auto i = intersect(a, b), d = subtract(a, b), un = unite(a, b);
    CHECK(i.area() + d.area() == doctest::Approx(a.area()).epsilon(1e-10));
    CHECK(un.area() == doctest::Approx(a.area() + b.area() - i.area()).epsilon(1e-10));
    CHECK(overlap_area(a, b) == doctest::Approx(i.area()).epsilon(1e-10));
    for (int s = 0; s < 200; ++s) {
      Point p{u(rng), u(rng)};
      const bool in_a = sample_in(a, p), in_b = sample_in(b, p);
      CHECK(sample_in(i, p) == (in_a && in_b));
      CHECK(sample_in(d, p) == (in_a && !in_b));
    }
  }
}

TEST_CASE("maximal rectangles of an L-shape") {
  auto rects = maximal_rectangles(std::vector<Box>{{0, 0, 3, 1}, {0, 1, 1, 3}});
  REQUIRE(rects.size() == 2);
  bool wide = false, tall = false;
  for (const auto& r : rects) {
    wide = wide || r == Box{0, 0, 3, 1};
    tall = tall || r == Box{0, 0, 1, 3};
  }
  CHECK(wide);
  CHECK(tall);
}

TEST_CASE("rasterize is consistent with complements") {
  Raster grid = Raster::blank({0, 0}, 0.25, 8, 8);
  auto cake = Region::raster(rasterize(Region::box({0, 0, 2, 2}), grid.origin, 0.25, 8, 8));
  auto piece = Region::box({0.5, 0.5, 1.5, 1.25});
  auto a = intersect(cake, piece);
  auto b = subtract(cake, piece);
  CHECK(a.area() + b.area() == doctest::Approx(cake.area()));
  CHECK(a.area() == doctest::Approx(0.75));
}

TEST_CASE("polygon construction rejects bad input") {
  CHECK_THROWS(Region::polygon({{0, 0}, {1, 0}, {2, 0}}));
  CHECK_THROWS(Region::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}));
  auto cw = Region::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.area() == doctest::Approx(1.0));
}

TEST_CASE("overlap with a raster is exact below the cell size") {
  Raster r = Raster::blank({0, 0}, 0.25, 4, 4);
  r.set(1, 1, true);
  const Region cell = Region::raster(r);
  CHECK(overlap_area(Region::box({0.25, 0.25, 0.25 + 1e-7, 0.25 + 1e-7}), cell) == doctest::Approx(1e-14).epsilon(1e-9));
  CHECK(overlap_area(Region::box({0.3, 0.3, 0.6, 0.6}), cell) == doctest::Approx(0.2 * 0.2));
  CHECK(overlap_area(cell, cell) == doctest::Approx(0.0625));
}
