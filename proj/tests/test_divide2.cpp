#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "geocake/certify.hpp"
#include "geocake/divide2.hpp"
#include "support.hpp"

using namespace geocake;
using namespace geocake::testing;

namespace {

const Box kUnit{0, 0, 1, 1};

bool has_step(const Allocation& a, const std::string& step) {
  return std::any_of(a.trace.begin(), a.trace.end(), [&](const std::string& s) { return s.rfind(step, 0) == 0; });
}

void certify_ok(const Allocation& a, const Region& cake, const Valuations& agents) {
  const auto c = check_envy_free(a, cake, agents, a.family, default_resolution(cake), a.epsilon + 1e-9);
  CAPTURE(a.procedure);
  CAPTURE(c.failing_clause);
  CHECK(c.pass);
  CHECK(check_proportionality(a, cake, agents, a.guarantee, a.epsilon + 1e-9));
}

}  // namespace

TEST_CASE("generic knife: twin squares, identical uniform agents") {
  const Region cake = Region::box(kUnit);
  const auto agents = uniform_agents(cake, 2);
  const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::squares());
  CHECK(a.guarantee == Rational::of(1, 4));
  for (const auto& s : a.shares) CHECK(s.value == doctest::Approx(0.25).epsilon(1e-6));
  certify_ok(a, cake, agents);
}

TEST_CASE("generic knife: twin squares with square pairs") {
  const Region cake = Region::box(kUnit);
  const auto agents = uniform_agents(cake, 2);
  const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::square_pairs());
  for (const auto& s : a.shares) CHECK(s.value == doctest::Approx(0.5).epsilon(1e-6));
  certify_ok(a, cake, agents);
}

TEST_CASE("generic knife: agent with a corner pool prefers its own piece") {
  const Region cake = Region::box(kUnit);
  Valuations agents{{"a", pool(kUnit, 8, 0, 0)}, {"b", normalize_on(uniform_density(kUnit, 8), cake)}};
  const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::squares());
  const double own = s_value(agents[0].density, a.shares[0].piece, PieceFamily::squares(), 1.0 / 256).value;
  const double other = s_value(agents[0].density, a.shares[1].piece, PieceFamily::squares(), 1.0 / 256).value;
  CHECK(own > other);
  CHECK(own == doctest::Approx(1.0));
}

TEST_CASE("single partition: four quarters with corner knives") {
  const Region cake = Region::box(kUnit);
  std::vector<Region> parts;
  std::vector<KnifeSpec> knives, rest;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      const Box q{i * 0.5, j * 0.5, i * 0.5 + 0.5, j * 0.5 + 0.5};
      parts.push_back(Region::box(q));
      knives.push_back({cake, CornerSquare{q, {double(i), double(j)}}});
      rest.push_back({cake, SweepLine{subtract(cake, Region::box(q)), 0, false}});
    }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const auto agents = trial == 0 ? uniform_agents(cake, 2) : random_agents(rng, cake, 2);
    const auto a = single_partition_2(cake, parts, knives, rest, agents, PieceFamily::squares());
    CHECK(a.guarantee == Rational::of(1, 4));
    certify_ok(a, cake, agents);
  }
}

TEST_CASE("single partition reports the failing condition") {
  const Region cake = Region::box(kUnit);
  const auto agents = uniform_agents(cake, 2);
  const std::vector<Region> parts{Region::box({0, 0, 0.5, 1}), Region::box({0.5, 0, 1, 1})};
  const std::vector<KnifeSpec> sweeps{{cake, SweepLine{parts[0], 0, false}}, {cake, SweepLine{parts[1], 0, false}}};
  try {
    single_partition_2(cake, parts, sweeps, sweeps, agents, PieceFamily::squares());
    FAIL("expected condition (c)");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(c)") != std::string::npos);
  }
  try {
    single_partition_2(cake, parts, {sweeps[0]}, sweeps, agents, PieceFamily::rectangles());
    FAIL("expected condition (b)");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(b)") != std::string::npos);
  }
}

TEST_CASE("archipelagos") {
  std::mt19937_64 rng(5);
  const Region rects = Region::rectilinear({{0, 0, 2, 1}, {3, 0, 4, 3}, {5, 1, 8, 2}});
  const Region squares = Region::rectilinear({{0, 0, 1, 1}, {2, 0, 4, 2}});
  for (int trial = 0; trial < 4; ++trial) {
    const auto ar = random_agents(rng, rects, 2, 16);
    const auto a = archipelago_2(rects, ar, PieceFamily::rectangles());
    CHECK(a.guarantee == Rational::of(1, 4));
    certify_ok(a, rects, ar);
    const auto as = random_agents(rng, squares, 2, 16);
    const auto b = archipelago_2(squares, as, PieceFamily::squares());
    CHECK(b.guarantee == Rational::of(1, 5));
    certify_ok(b, squares, as);
  }
}

TEST_CASE("multiple partition on fat rectangles") {
  const Region cake = Region::box({0, 0, 2, 1});
  SUBCASE("uniform") {
    const auto agents = uniform_agents(cake, 2);
    const auto a = multiple_partition_2(cake, agents, 2);
    CHECK(a.guarantee == Rational::of(1, 3));
    certify_ok(a, cake, agents);
    for (const auto& s : a.shares) CHECK(s.value >= 1.0 / 3 - a.epsilon);
  }
  SUBCASE("both agents want the same quarter") {
    const Box b = cake.bounds();
    Valuations agents{{"a", pool(b, 8, 0, 0)}, {"b", pool(b, 8, 0, 0)}};
    for (auto& v : agents) v.density = normalize_on(v.density, cake);
    const auto a = multiple_partition_2(cake, agents, 2);
    CHECK(has_step(a, "3-a-4-a"));
    certify_ok(a, cake, agents);
    for (const auto& s : a.shares) CHECK(in_family(s.usable, PieceFamily::fat_rects(2)));
  }
  SUBCASE("adversarial corner pool for one agent") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 6; ++trial) {
      Valuations agents{{"a", normalize_on(pool(cake.bounds(), 8, static_cast<int>(rng() % 8), 0), cake)},
                        {"b", random_density(rng, cake)}};
      const auto a = multiple_partition_2(cake, agents, 2);
      certify_ok(a, cake, agents);
    }
  }
  CHECK_THROWS_AS(multiple_partition_2(cake, uniform_agents(cake, 2), 1.5), std::invalid_argument);
}

TEST_CASE("fat cakes: unit square and raster pentagon") {
  SUBCASE("unit square") {
    const Region cake = Region::box(kUnit);
    const auto agents = uniform_agents(cake, 2);
    const auto a = divide_fat_2(cake, agents);
    CHECK(a.guarantee == Rational::of(1, 2));
    for (const auto& s : a.shares) {
      CHECK(s.value >= 0.5 - a.epsilon - 1e-9);
      CHECK(fatness(s.usable).ratio <= 2 + fatness(s.usable).error_bound + 1e-9);
    }
  }
  SUBCASE("pentagon") {
    const Region cake = raster_pentagon();
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 3; ++trial) {
      const auto agents = random_agents(rng, cake, 2);
      const auto a = divide_fat_2(cake, agents);
      certify_ok(a, cake, agents);
    }
  }
  SUBCASE("agent without value on the right half stays in the left phase") {
    const Region cake = Region::box(kUnit);
    Valuations agents{{"a", normalize_on(pool(kUnit, 8, 1, 4), cake)}, {"b", normalize_on(pool(kUnit, 8, 2, 3), cake)}};
    const auto a = divide_fat_2(cake, agents);
    CHECK(has_step(a, "3-a"));
    certify_ok(a, cake, agents);
  }
}

TEST_CASE("rotating knife") {
  SUBCASE("uniform disc polygon") {
    const Region cake = Region::polygon(regular_polygon({0, 0}, 1, 1, 48).vertices);
    Valuations agents;
    for (int i = 0; i < 2; ++i) agents.push_back({"a" + std::to_string(i), normalize_on(uniform_density({-1, -1, 1, 1}, 16), cake)});
    const auto a = rotating_knife_2(cake, agents);
    for (const auto& s : a.shares) CHECK(s.value == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("skewed ellipse") {
    const Region cake = Region::polygon(regular_polygon({0, 0}, 1.5, 1, 64).vertices);
    std::mt19937_64 rng(4);
    const auto agents = random_agents(rng, cake, 2, 12);
    const auto a = rotating_knife_2(cake, agents);
    CHECK(a.shares[0].value == doctest::Approx(integrate(agents[0].density, a.shares[0].piece)));
    const double w = integrate(agents[0].density, a.shares[0].piece);
    CHECK(std::abs(w - 0.5) <= 1e-6);
    for (const auto& s : a.shares) {
      CHECK(s.piece.is_polygon());
      const auto f = fatness(s.piece);
      CHECK(f.ratio <= 2 * fatness(cake).ratio + 1e-9);
    }
    certify_ok(a, cake, agents);
  }
  CHECK_THROWS(rotating_knife_2(Region::box(kUnit), uniform_agents(Region::box(kUnit), 2)));
}

TEST_CASE("envy from proportional") {
  const Region cake = Region::box(kUnit);
  const PieceFamily sq = PieceFamily::squares();
  const Box left{0, 0, 0.5, 0.5}, right{0.5, 0.5, 1, 1};
  auto fixed = [&](Region r0, Region r1) {
    return [=](const Region&, const Valuations& agents) {
      Allocation a;
      a.procedure = "fixed";
      a.guarantee = Rational::of(1, 4);
      a.family = sq;
      a.shares = {make_share(agents[0], r0, sq, 1.0 / 256), make_share(agents[1], r1, sq, 1.0 / 256)};
      return a;
    };
  };
  SUBCASE("already envy-free") {
    Valuations agents{{"a", pool(kUnit, 4, 0, 0)}, {"b", pool(kUnit, 4, 3, 3)}};
    const auto a = envy_from_prop_2(fixed(Region::box(left), Region::box(right)), cake, agents, sq);
    CHECK(has_step(a, "a:"));
    CHECK(a.shares[0].value == doctest::Approx(1.0));
  }
  SUBCASE("mutual envy swaps") {
    Valuations agents{{"a", pool(kUnit, 4, 3, 3)}, {"b", pool(kUnit, 4, 0, 0)}};
    const auto a = envy_from_prop_2(fixed(Region::box(left), Region::box(right)), cake, agents, sq);
    CHECK(has_step(a, "b:"));
    CHECK(a.shares[0].value == doctest::Approx(1.0));
    CHECK(a.shares[1].value == doctest::Approx(1.0));
  }
  SUBCASE("one-sided envy re-divides the envied square") {
    const GridDensity skew({0, 0}, 0.5, 2, 2, {1, 0, 0, 3});
    Valuations agents{{"a", normalize(skew)}, {"b", pool(kUnit, 4, 3, 3)}};
    const auto a = envy_from_prop_2(fixed(Region::box(left), Region::box(right)), cake, agents, sq);
    CHECK(has_step(a, "c:"));
    for (const auto& s : a.shares) CHECK(overlap_area(s.piece, Region::box(right)) == doctest::Approx(s.piece.area()));
    CHECK(a.guarantee == Rational::of(1, 16));
    certify_ok(a, cake, agents);
  }
}

TEST_CASE("guarantees hold on random instances") {
  std::mt19937_64 rng(2024);
  const Region square = Region::box(kUnit);
  const Region rect = Region::box({0, 0, 3, 1});
  const Region blob = raster_blob(rng, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto as = random_agents(rng, square, 2);
    certify_ok(generic_knife_2({square, TwinSquares{kUnit}}, as, PieceFamily::squares(), {}, Rational::of(1, 4)),
               square, as);
    const auto ar = random_agents(rng, rect, 2, 12);
    certify_ok(multiple_partition_2(rect, ar, 3), rect, ar);
    const auto ab = random_agents(rng, blob, 2);
    certify_ok(divide_fat_2(blob, ab), blob, ab);
  }
}

TEST_CASE("identical agents end with equal values") {
  std::mt19937_64 rng(8);
  const Region cake = Region::box(kUnit);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_density(rng, cake);
    const Valuations agents{{"a", d}, {"b", d}};
    const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::squares(), {}, Rational::of(1, 4));
    CHECK(std::abs(a.shares[0].value - a.shares[1].value) <= a.epsilon + 1e-9);
  }
}

TEST_CASE("the first agent's guarantee survives an adversarial second agent") {
  std::mt19937_64 rng(77);
  const Region cake = Region::box(kUnit);
  const Region rect = Region::box({0, 0, 2, 1});
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 12; ++trial) {
    Divide2Options o;
    const double fixed_t = u(rng);
    const int bias = static_cast<int>(rng() % 3);
    o.adversary.time = [=](double) { return fixed_t; };
    o.adversary.choice = [=](int honest, int options) { return bias == 0 ? honest : (honest + bias) % options; };
    const auto as = random_agents(rng, cake, 2);
    const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, as, PieceFamily::squares(), o, Rational::of(1, 4));
    CHECK(a.shares[0].value >= 0.25 - a.epsilon - 1e-9);
    const auto ar = random_agents(rng, rect, 2);
    const auto b = multiple_partition_2(rect, ar, 2, o);
    CHECK(b.shares[0].value >= 1.0 / 3 - b.epsilon - 1e-9);
  }
}
