#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <numeric>
#include <random>
#include <set>

#include "geocake/certify.hpp"
#include "geocake/cover.hpp"
#include "geocake/divide2.hpp"
#include "geocake/dividen.hpp"
#include "support.hpp"

using namespace geocake;
using namespace geocake::testing;

namespace {

const Box kUnit{0, 0, 1, 1};

std::vector<double> random_point(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& x : t) x = e(rng);
  const double s = std::accumulate(t.begin(), t.end(), 0.0);
  for (auto& x : t) x /= s;
  return t;
}

std::vector<double> vertex(int n, int i) {
  std::vector<double> t(static_cast<std::size_t>(n), 0.0);
  t[static_cast<std::size_t>(i)] = 1;
  return t;
}

void check_partition(const Region& cake, const std::vector<Region>& pieces) {
  double total = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    total += pieces[i].area();
    for (std::size_t j = i + 1; j < pieces.size(); ++j) CHECK(overlap_area(pieces[i], pieces[j]) < 1e-9);
  }
  CHECK(total == doctest::Approx(cake.area()).epsilon(1e-9));
}

}  // namespace

TEST_CASE("square tuple: leaves and family") {
  const Region cake = Region::box(kUnit);
  const auto t3 = build_square_tuple(cake, 3);
  CHECK(t3.leaf_piece == std::vector<int>{0, -1, 1, 2});
  CHECK(t3.loss_bound == Rational::of(16, 1));
  CHECK(t3.family.kind == PieceFamily::Kind::squares);
  const auto t5 = build_square_tuple(cake, 5);
  CHECK(t5.leaf_piece.size() == 8);
  CHECK(t5.loss_bound == Rational::of(64, 1));
  const auto rect = build_square_tuple(Region::box({0, 0, 2, 1}), 3);
  CHECK(rect.family.kind == PieceFamily::Kind::fat_rects);
  CHECK(rect.family.ratio == doctest::Approx(2));
  CHECK_THROWS_AS(build_square_tuple(cake, 1), std::invalid_argument);
}

TEST_CASE("square tuple: faces give the whole cake to one piece") {
  const Region cake = Region::box(kUnit);
  for (int n : {2, 3, 4, 5}) {
    const auto tp = build_square_tuple(cake, n);
    for (int i = 0; i < n; ++i) {
      const auto pieces = eval_tuple(tp, vertex(n, i));
      for (int j = 0; j < n; ++j) {
        CHECK(pieces[static_cast<std::size_t>(j)].area() == doctest::Approx(j == i ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("square tuple: pieces partition the cake and respect the loss bound") {
  std::mt19937_64 rng(7);
  const Region cake = Region::box(kUnit);
  for (int n : {3, 4}) {
    const auto tp = build_square_tuple(cake, n);
    std::vector<std::vector<double>> pts;
    for (int s = 0; s < 100; ++s) {
      pts.push_back(random_point(rng, n));
      check_partition(cake, eval_tuple(tp, pts.back()));
    }
    const auto loss = sampled_tuple_loss(tp, pts);
    CHECK_FALSE(loss.is_unbounded());
    CHECK(loss.value() <= tp.loss_bound.value());
  }
}

TEST_CASE("square tuple: a zero coordinate empties its piece") {
  const Region cake = Region::box(kUnit);
  const auto tp = build_square_tuple(cake, 4);
  const auto pieces = eval_tuple(tp, std::vector<double>{0.3, 0.0, 0.5, 0.2});
  CHECK(pieces[1].is_empty());
  check_partition(cake, pieces);
}

TEST_CASE("eval_tuple rejects points off the simplex") {
  const auto tp = build_square_tuple(Region::box(kUnit), 3);
  CHECK_THROWS_AS(eval_tuple(tp, std::vector<double>{0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(eval_tuple(tp, std::vector<double>{0.6, 0.6, -0.2}), std::invalid_argument);
  CHECK_THROWS_AS(eval_tuple(tp, std::vector<double>{0.2, 0.2, 0.2}), std::invalid_argument);
}

TEST_CASE("fat tuple: grid size and family") {
  const Region cake = raster_pentagon();
  const auto t3 = build_fat_tuple(cake, 3);
  CHECK(t3.grid_m == 2);
  CHECK(t3.grid.cubes.size() == 4);
  CHECK(t3.loss_bound == Rational::of(3, 1));
  CHECK(t3.family.kind == PieceFamily::Kind::fat_objects);
  const auto t5 = build_fat_tuple(cake, 5);
  CHECK(t5.grid_m == 3);
  CHECK(t5.family.ratio == doctest::Approx(1.5 * t3.family.ratio));
  CHECK_THROWS_AS(build_fat_tuple(cake, 10), std::invalid_argument);
}

TEST_CASE("fat tuple: partitions with fat pieces") {
  std::mt19937_64 rng(11);
  const Region cake = raster_pentagon();
  for (int n : {3, 5}) {
    const auto tp = build_fat_tuple(cake, n);
    for (int i = 0; i < n; ++i) {
      const auto pieces = eval_tuple(tp, vertex(n, i));
      CHECK(pieces[static_cast<std::size_t>(i)].area() == doctest::Approx(cake.area()));
    }
    std::vector<std::vector<double>> pts;
    for (int s = 0; s < 6; ++s) {
      pts.push_back(random_point(rng, n));
      const auto pieces = eval_tuple(tp, pts.back());
      check_partition(cake, pieces);
      for (const auto& p : pieces) CHECK(in_family(p, tp.family));
    }
    CHECK(sampled_tuple_loss(tp, pts).value() <= n);
  }
}

TEST_CASE("simplex grid: small examples") {
  const auto g2 = build_simplex_grid(2, 4);
  REQUIRE(g2.vertices.size() == 5);
  CHECK(g2.cells.size() == 4);
  std::set<int> owners;
  for (std::size_t c = 0; c < g2.cells.size(); ++c) {
    const int a = g2.owner[static_cast<std::size_t>(g2.cells[c][0])];
    const int b = g2.owner[static_cast<std::size_t>(g2.cells[c][1])];
    CHECK(a != b);
  }
  for (int n : {3, 4}) {
    const int k = n == 3 ? 2 : 3;
    const auto g = build_simplex_grid(n, k);
    CHECK(g.cells.size() == static_cast<std::size_t>(std::pow(k, n - 1)));
    for (const auto& cell : g.cells) {
      std::set<int> own;
      for (int v : cell) own.insert(g.owner[static_cast<std::size_t>(v)]);
      CHECK(own.size() == static_cast<std::size_t>(n));
    }
  }
  CHECK(vertex_owner(std::vector<int>{0, 1, 1}, 3) == 0);
  CHECK(vertex_owner(std::vector<int>{0, 2, 0}, 3) == 2);
}

TEST_CASE("simplex grid: Sperner labelling has an odd number of full cells") {
  std::mt19937_64 rng(3);
  const Region cake = Region::box(kUnit);
  for (int n : {2, 3}) {
    const auto tp = build_square_tuple(cake, n);
    const auto agents = random_agents(rng, cake, n);
    for (int k : {4, 8, 16}) {
      auto g = build_simplex_grid(n, k);
      label_grid(g, tp, agents, 1.0 / 64);
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        CHECK(g.vertices[v][static_cast<std::size_t>(g.label[v])] > 0);
      }
      CHECK(fully_labeled_cells(g).size() % 2 == 1);
      CHECK(sperner_search(tp, g, agents, 1.0 / 64).has_value());
    }
  }
}

TEST_CASE("divide_n: two agents match the generic knife") {
  std::mt19937_64 rng(5);
  const Region cake = Region::box(kUnit);
  const auto agents = random_agents(rng, cake, 2);
  const auto a = divide_n(cake, agents, PieceFamily::squares());
  const auto b = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::squares());
  for (int i = 0; i < 2; ++i) {
    CHECK(a.shares[static_cast<std::size_t>(i)].value == doctest::Approx(b.shares[static_cast<std::size_t>(i)].value).epsilon(1e-6));
  }
}

TEST_CASE("divide_n: three and four agents on a square") {
  std::mt19937_64 rng(17);
  const Region cake = Region::box(kUnit);
  for (int n : {3, 4}) {
    const auto agents = random_agents(rng, cake, n);
    const auto a = divide_n(cake, agents, PieceFamily::squares());
    CAPTURE(n);
    CAPTURE(a.trace.back());
    CHECK(a.certified);
    CHECK(a.epsilon <= 1e-3 + 1e-12);
    const auto c = check_envy_free(a, cake, agents, a.family, default_resolution(cake), a.epsilon + 1e-9);
    CAPTURE(c.failing_clause);
    CHECK(c.pass);
    CHECK(check_proportionality(a, cake, agents, a.guarantee, a.epsilon + 1e-9));
  }
}

TEST_CASE("divide_n: refinement inside the final cell reaches the tolerance at a low mesh cap") {
  GenOptions o;
  o.seed = 6003;
  o.cake = "square";
  o.family = "squares";
  o.agents = 4;
  const Instance in = generate_instance(o);
  DivideNOptions opts;
  opts.k_max = 512;
  const auto a = divide_n(in.cake, in.agents, in.family, opts);
  CAPTURE(a.trace.back());
  CHECK(a.trace.back().rfind("refined", 0) == 0);
  CHECK(a.certified);
  CHECK(a.epsilon <= opts.epsilon + 1e-12);
  const auto c = check_envy_free(a, in.cake, in.agents, a.family, default_resolution(in.cake) / 2, a.epsilon + 1e-12);
  CAPTURE(c.failing_clause);
  CHECK(c.pass);
}

TEST_CASE("divide_n: three agents on a fat raster cake") {
  std::mt19937_64 rng(23);
  const Region cake = raster_pentagon();
  const auto agents = random_agents(rng, cake, 3);
  const auto a = divide_n(cake, agents, PieceFamily::fat_objects(4));
  CAPTURE(a.trace.back());
  CHECK(a.guarantee == Rational::of(1, 3));
  const auto c = check_envy_free(a, cake, agents, a.family, default_resolution(cake), a.epsilon + 1e-9);
  CAPTURE(c.failing_clause);
  CHECK(c.pass);
  CHECK(check_proportionality(a, cake, agents, a.guarantee, a.epsilon + 1e-9));
}

TEST_CASE("divide_n: unsupported family") {
  const Region cake = Region::box(kUnit);
  CHECK_THROWS_AS(divide_n(cake, uniform_agents(cake, 3), PieceFamily::square_pairs()), std::invalid_argument);
  CHECK_THROWS_AS(divide_n(Region::box({0, 0, 2, 1}), uniform_agents(Region::box({0, 0, 2, 1}), 3),
                           PieceFamily::squares()),
                  std::invalid_argument);
}

TEST_CASE("square tuple: three-agent layout at t = (0.3, 0.1, 0.6)") {
  const Region cake = Region::box({0, 0, 40, 40});
  const auto tp = build_square_tuple(cake, 3);
  const auto pieces = eval_tuple(tp, std::vector<double>{0.3, 0.1, 0.6});
  CHECK(pieces[0].area() == doctest::Approx(2 * 12.0 * 12.0));
  CHECK(overlap_area(pieces[0], Region::box({0, 0, 12, 12})) == doctest::Approx(144));
  CHECK(overlap_area(pieces[0], Region::box({28, 28, 40, 40})) == doctest::Approx(144));
  CHECK(pieces[1].area() == doctest::Approx(4 * 4.0 * 4.0));
  for (const Box& b : {Box{12, 0, 16, 4}, Box{36, 24, 40, 28}, Box{0, 12, 4, 16}, Box{24, 36, 28, 40}}) {
    CHECK(overlap_area(pieces[1], Region::box(b)) == doctest::Approx(16));
  }
  CHECK(pieces[2].area() == doctest::Approx(1600 - 288 - 64));
}
