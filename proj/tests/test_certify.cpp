#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geocake/certify.hpp"
#include "geocake/divide2.hpp"
#include "support.hpp"

using namespace geocake;
using namespace geocake::testing;

namespace {

const Box kUnit{0, 0, 1, 1};

Allocation manual(const Valuations& agents, const PieceFamily& fam, std::vector<Region> pieces) {
  Allocation a;
  a.procedure = "manual";
  a.family = fam;
  for (std::size_t i = 0; i < pieces.size(); ++i) a.shares.push_back(make_share(agents[i], pieces[i], fam, 1.0 / 256));
  return a;
}

}  // namespace

TEST_CASE("family membership") {
  CHECK(in_family(Region::box({0, 0, 1, 1}), PieceFamily::squares()));
  CHECK_FALSE(in_family(Region::box({0, 0, 2, 1}), PieceFamily::squares()));
  CHECK(in_family(Region::box({0, 0, 2, 1}), PieceFamily::fat_rects(2)));
  CHECK_FALSE(in_family(Region::box({0, 0, 3, 1}), PieceFamily::fat_rects(2)));
  CHECK_FALSE(in_family(Region::rectilinear({{0, 0, 2, 1}, {0, 1, 1, 2}}), PieceFamily::rectangles()));
  CHECK(in_family(Region::rectilinear({{0, 0, 1, 1}, {2, 2, 3, 3}}), PieceFamily::square_pairs()));
  CHECK(in_family(Region{}, PieceFamily::squares()));
  CHECK(in_family(Region::polygon({{0, 0}, {1, 0}, {0, 1}}), PieceFamily::fat_objects(2)));
}

TEST_CASE("symmetric allocation passes, crossed pools fail") {
  const Region cake = Region::box(kUnit);
  const Valuations agents{{"a", pool(kUnit, 4, 0, 0)}, {"b", pool(kUnit, 4, 3, 3)}};
  const Region lo = Region::box({0, 0, 0.5, 0.5}), hi = Region::box({0.5, 0.5, 1, 1});
  const auto good = manual(agents, PieceFamily::squares(), {lo, hi});
  const auto c = check_envy_free(good, cake, agents, PieceFamily::squares(), 1.0 / 256, 1e-9);
  CHECK(c.pass);
  CHECK(c.min_proportionality == doctest::Approx(1.0));
  const auto bad = manual(agents, PieceFamily::squares(), {hi, lo});
  const auto d = check_envy_free(bad, cake, agents, PieceFamily::squares(), 1.0 / 256, 1e-9);
  CHECK_FALSE(d.pass);
  CHECK(d.failing_clause == "envy");
  REQUIRE(d.envy_pairs.size() == 2);
  CHECK(d.envy_pairs[0] == std::pair{0, 1});
}

TEST_CASE("overlap and containment are caught") {
  const Region cake = Region::box(kUnit);
  const auto agents = uniform_agents(cake, 2);
  const auto overlap = manual(agents, PieceFamily::squares(), {Region::box({0, 0, 0.6, 0.6}), Region::box({0.4, 0.4, 1, 1})});
  CHECK(check_envy_free(overlap, cake, agents, PieceFamily::squares(), 1.0 / 256, 1).failing_clause == "disjointness");
  const auto outside = manual(agents, PieceFamily::squares(), {Region::box({0, 0, 0.5, 0.5}), Region::box({0.8, 0.8, 1.3, 1.3})});
  CHECK(check_envy_free(outside, cake, agents, PieceFamily::squares(), 1.0 / 256, 1).failing_clause == "containment");
  CHECK_THROWS(check_envy_free(outside, cake, {agents[0]}, PieceFamily::squares(), 1.0 / 256, 1));
}

TEST_CASE("proportionality thresholds") {
  const Region cake = Region::box(kUnit);
  const auto agents = uniform_agents(cake, 2);
  const auto a = generic_knife_2({cake, TwinSquares{kUnit}}, agents, PieceFamily::squares());
  CHECK(check_proportionality(a, cake, agents, Rational::of(1, 4), 1e-6));
  CHECK_FALSE(check_proportionality(a, cake, agents, Rational::of(1, 3), 1e-6));
  const auto b = multiple_partition_2(Region::box({0, 0, 2, 1}), uniform_agents(Region::box({0, 0, 2, 1}), 2), 2);
  CHECK(check_proportionality(b, Region::box({0, 0, 2, 1}), uniform_agents(Region::box({0, 0, 2, 1}), 2),
                              Rational::of(1, 3), b.epsilon + 1e-9));
  Allocation empty;
  CHECK_FALSE(check_proportionality(empty, cake, agents, Rational::of(1, 4), 0));
}

TEST_CASE("cover bound: best square is worth at least value over cover number") {
  std::mt19937_64 rng(31);
  const std::vector<Region> shapes{Region::box({0, 0, 3.1, 1}), Region::rectilinear({{0, 0, 2, 1}, {0, 1, 1, 2}}),
                                   Region::rectilinear({{0, 1, 3, 2}, {1, 0, 2, 1}})};
  for (const auto& r : shapes) {
    for (int k = 0; k < 5; ++k) {
      const auto d = random_density(rng, r);
      const int cov = *cover_number(r, PieceFamily::squares());
      const double best = s_value(d, r, PieceFamily::squares(), 1.0 / 256).value;
      CHECK(best >= integrate(d, r) / cov - 1e-9);
    }
  }
}

TEST_CASE("upper-bound fixtures") {
  for (const auto& name : fixture_names()) {
    const auto fx = make_fixture(name);
    for (const auto& rep : verify_upper_bound(fx, 1.0 / 256)) {
      CAPTURE(name);
      CAPTURE(rep.detail);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("a wrong claimed bound is rejected") {
  auto fx = make_fixture("fig1_three_pools");
  fx.bound = Rational::of(1, 4);
  CHECK_FALSE(verify_upper_bound(fx, 1.0 / 256).front().pass);
  CHECK_THROWS(verify_upper_bound(fx, 0.5));
}

TEST_CASE("slim desert: one bridge at most and water runs out") {
  const auto rep = verify_upper_bound(make_fixture("fig9_slim_desert"), 1.0 / 256).front();
  CHECK(rep.pass);
  CHECK(rep.max_bridges == 1);
  CHECK(rep.min_bridge_side > 0.5);
  // A generous cap lets the west be split among the bridges.
  const auto loose = make_slim_desert(3, 4, 0.01, 0.05);
  auto f = loose;
  f.family = PieceFamily::fat_objects(40);
  CHECK_FALSE(verify_upper_bound(f, 1.0 / 256).front().pass);
}
