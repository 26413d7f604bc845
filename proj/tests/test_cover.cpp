#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "geocake/cover.hpp"

using namespace geocake;

namespace {

// Minimum cover of a lattice region by lattice boxes of the family, by
// breadth-first search over covered-cell masks.
int lattice_oracle(const std::vector<std::vector<int>>& grid, double ratio) {
  const int h = static_cast<int>(grid.size()), w = static_cast<int>(grid[0].size());
  auto bit = [&](int i, int j) { return std::uint32_t{1} << (j * w + i); };
  std::uint32_t target = 0;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i)
      if (grid[j][i]) target |= bit(i, j);
  std::vector<std::uint32_t> pieces;
  for (int j0 = 0; j0 < h; ++j0)
    for (int i0 = 0; i0 < w; ++i0)
      for (int j1 = j0 + 1; j1 <= h; ++j1)
        for (int i1 = i0 + 1; i1 <= w; ++i1) {
          const int a = i1 - i0, b = j1 - j0;
          if (std::max(a, b) > ratio * std::min(a, b) + 1e-9) continue;
          std::uint32_t m = 0;
          for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) m |= bit(i, j);
          if ((m & ~target) == 0) pieces.push_back(m);
        }
  if (target == 0) return 0;
  std::vector<std::uint32_t> frontier{0};
  for (int depth = 1; depth <= 16; ++depth) {
    std::vector<std::uint32_t> next;
    for (auto f : frontier)
      for (auto p : pieces) {
        const auto g = f | p;
        if (g == target) return depth;
        if (g != f) next.push_back(g);
      }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }
  return -1;
}

Region lattice_region(const std::vector<std::vector<int>>& grid) {
  std::vector<Box> boxes;
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (std::size_t i = 0; i < grid[j].size(); ++i)
      if (grid[j][i]) boxes.push_back({double(i), double(j), double(i + 1), double(j + 1)});
  return Region::rectilinear(boxes);
}

}  // namespace

TEST_CASE("single rectangle against squares and fat rectangles") {
  const auto r = Region::box({0, 0, 3.1, 1});
  CHECK(*cover_number(r, PieceFamily::squares()) == 4);
  CHECK(*cover_number(r, PieceFamily::fat_rects(2)) == 2);
  CHECK(*cover_number(r, PieceFamily::rectangles()) == 1);
  CHECK(*cover_number(Region::box({0, 0, 3, 1}), PieceFamily::squares()) == 3);
}

TEST_CASE("L and T shapes") {
  const auto l = Region::rectilinear({{0, 0, 2, 1}, {0, 1, 1, 2}});
  CHECK(*cover_number(l, PieceFamily::rectangles()) == 2);
  CHECK(*cover_number(l, PieceFamily::squares()) == 3);
  const auto t = Region::rectilinear({{0, 1, 3, 2}, {1, 0, 2, 1}});
  CHECK(*cover_number(t, PieceFamily::squares()) == 4);
  CHECK(*cover_number(t, PieceFamily::rectangles()) == 2);
  const auto fat_t = Region::rectilinear({{0, 1, 2, 2}, {0.5, 0, 1.5, 1}});
  CHECK(*cover_number(fat_t, PieceFamily::squares()) == 3);
}

TEST_CASE("archipelago covers add up") {
  const auto a = Region::rectilinear({{0, 0, 1, 1}, {2, 0, 4, 1}, {5, 0, 6, 3}});
  CHECK(*cover_number(a, PieceFamily::squares()) == 1 + 2 + 3);
  CHECK(*cover_number(a, PieceFamily::rectangles()) == 3);
}

TEST_CASE("square pairs halve the square cover") {
  CHECK(*cover_number(Region::box({0, 0, 3, 1}), PieceFamily::square_pairs()) == 2);
  CHECK(*cover_number(Region::box({0, 0, 1, 1}), PieceFamily::square_pairs()) == 1);
}

TEST_CASE("empty, whole-piece and polygon regions") {
  CHECK(*cover_number(Region{}, PieceFamily::squares()) == 0);
  CHECK(*cover_number(Region::box({0, 0, 5, 1}), PieceFamily::all_pieces()) == 1);
  const auto tri = Region::polygon({{0, 0}, {1, 0}, {0, 1}});
  CHECK_FALSE(cover_number(tri, PieceFamily::squares()).has_value());
  CHECK(*cover_number(tri, PieceFamily::fat_objects(4)) == 1);
  CHECK(*cover_number(Region::box({0, 0, 5, 1}), PieceFamily::fat_objects(2)) == 3);
}

TEST_CASE("returned pieces are admissible and tile the region") {
  const auto l = Region::rectilinear({{0, 0, 3, 1}, {0, 1, 1, 3}});
  const auto c = cover(l, PieceFamily::squares());
  REQUIRE(c);
  CHECK(c->count == static_cast<int>(c->pieces.size()));
  Region u;
  for (const auto& b : c->pieces) {
    CHECK(b.is_square());
    CHECK(overlap_area(Region::box(b), l) == doctest::Approx(b.area()));
    u = unite(u, Region::box(b));
  }
  CHECK(u.area() == doctest::Approx(l.area()));
}

TEST_CASE("agrees with the lattice oracle on random small shapes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 2 + static_cast<int>(rng() % 3), h = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<int>> g(h, std::vector<int>(w));
    for (auto& row : g)
      for (auto& c : row) c = rng() % 3 != 0;
    const auto r = lattice_region(g);
    for (double ratio : {1.0, 2.0}) {
      const int expect = lattice_oracle(g, ratio);
      const auto fam = ratio == 1.0 ? PieceFamily::squares() : PieceFamily::fat_rects(ratio);
      const auto got = cover(r, fam);
      REQUIRE(got);
      CHECK(got->minimal);
      CHECK(got->count == expect);
    }
  }
}
