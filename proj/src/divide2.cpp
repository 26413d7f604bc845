#include "geocake/divide2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geocake/cover.hpp"
#include "geocake/svalue.hpp"

namespace geocake {

namespace {

struct Protocol {
  Protocol(const Valuations& a, PieceFamily f, double res, const Divide2Options& o)
      : agents(a), family(f), resolution(res), opts(o) {}

  const Valuations& agents;
  PieceFamily family;
  double resolution;
  const Divide2Options& opts;
  double error = 0;  // largest s_value error bound behind any comparison
  std::vector<std::string> trace;

  double value(int i, const Region& r) {
    const auto sv = s_value(agents[static_cast<std::size_t>(i)].density, r, family, resolution);
    error = std::max(error, sv.error_bound);
    return sv.value;
  }

  // Best option for agent i; ties go to the lower index.
  int pick(int i, const std::vector<Region>& options) {
    int best = 0;
    double best_v = -1;
    for (int k = 0; k < static_cast<int>(options.size()); ++k) {
      const double v = value(i, options[static_cast<std::size_t>(k)]);
      if (v > best_v) best = k, best_v = v;
    }
    if (i == 1 && opts.adversary.choice) {
      const int n = static_cast<int>(options.size());
      best = std::clamp(opts.adversary.choice(best, n), 0, n - 1);
    }
    return best;
  }

  Allocation give(std::string procedure, const Region& to0, const Region& to1, Rational guarantee) {
    Allocation a;
    a.procedure = std::move(procedure);
    a.guarantee = guarantee;
    a.family = family;
    a.shares = {make_share(agents[0], to0, family, resolution), make_share(agents[1], to1, family, resolution)};
    double share_err = 0;
    for (const auto& s : a.shares) share_err = std::max(share_err, s.error);
    a.epsilon = 2 * opts.tol + 2 * std::max(error, share_err);
    a.trace = trace;
    a.certified = true;
    return a;
  }

  // Two-way choice between a region and its complement in the cake; returns
  // the allocation when the agents disagree.
  std::optional<Allocation> region_or_rest(const std::string& procedure, const Region& cake, const Region& part,
                                           Rational guarantee, int& both) {
    const std::vector<Region> options{part, subtract(cake, part)};
    const int c0 = pick(0, options), c1 = pick(1, options);
    both = c0;
    if (c0 == c1) return std::nullopt;
    return give(procedure, options[static_cast<std::size_t>(c0)], options[static_cast<std::size_t>(c1)], guarantee);
  }
};

void require_two(const Valuations& agents) {
  if (agents.size() != 2) throw std::invalid_argument("two-agent procedure needs exactly two valuations");
}

double resolution_for(const Region& cake, const Divide2Options& opts) {
  return opts.resolution > 0 ? opts.resolution : default_resolution(cake);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Allocation knife_step(Protocol& p, const KnifeSpec& spec, const std::string& procedure, Rational guarantee,
                      const std::string& step) {
  p.trace.push_back(step + ": generic knife " + spec.name());
  auto a = generic_knife_2(spec, p.agents, p.family, p.opts, guarantee);
  a.procedure = procedure;
  a.epsilon = std::max(a.epsilon, 2 * p.opts.tol + 2 * p.error);
  p.trace.insert(p.trace.end(), a.trace.begin(), a.trace.end());
  a.trace = p.trace;
  return a;
}

Region rasterize_cake(const Region& cake, int cells) {
  if (cake.is_raster()) return cake;
  const Box b = cake.bounds();
  const double cell = std::max(b.width(), b.height()) / cells;
  const int nx = std::max(1, static_cast<int>(std::ceil(b.width() / cell - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(b.height() / cell - 1e-9)));
  return Region::raster(rasterize(cake, {b.xmin, b.ymin}, cell, nx, ny));
}

}  // namespace

Allocation generic_knife_2(const KnifeSpec& spec, const Valuations& agents, const PieceFamily& family,
                           const Divide2Options& opts, std::optional<Rational> guarantee) {
  require_two(agents);
  HalvingOptions h;
  h.tol = opts.tol;
  h.resolution = resolution_for(spec.cake, opts);
  const auto r0 = find_halving_time(spec, agents[0], family, h);
  const auto r1 = find_halving_time(spec, agents[1], family, h);
  double t1 = r1.t;
  if (opts.adversary.time) t1 = std::clamp(opts.adversary.time(r1.t), 0.0, 1.0);
  const double t = (r0.t + t1) / 2;
  const bool first_is_0 = r0.t <= t1;
  const auto e = eval_knife(spec, t);

  Protocol p{agents, family, h.resolution, opts};
  p.trace.push_back("halving times " + fmt(r0.t) + " " + fmt(t1) + ", cut at " + fmt(t));
  const Rational g = guarantee ? *guarantee : knife_loss_bound(spec, family).reciprocal();
  auto a = first_is_0 ? p.give("generic_knife", e.piece, e.complement, g)
                      : p.give("generic_knife", e.complement, e.piece, g);
  a.epsilon += r0.search_error + r1.search_error;
  return a;
}

Allocation single_partition_2(const Region& cake, const std::vector<Region>& parts,
                              const std::vector<KnifeSpec>& part_knives,
                              const std::vector<KnifeSpec>& complement_knives, const Valuations& agents,
                              const PieceFamily& family, const Divide2Options& opts) {
  require_two(agents);
  if (parts.empty() || part_knives.size() != parts.size() || complement_knives.size() != parts.size()) {
    throw std::invalid_argument("condition (b): every part needs a knife and a complement knife");
  }
  int m_parts = 0;
  for (const auto& part : parts) {
    const auto c = cover_number(part, family);
    if (!c) throw std::invalid_argument("condition (a): a part has no cover in the family");
    m_parts += *c;
  }
  int m = std::max(2, m_parts);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double want = parts[j].area(), got = knife_end(part_knives[j]).area();
    const double rest = cake.area() - want, got_rest = knife_end(complement_knives[j]).area();
    if (std::abs(want - got) > 1e-9 * cake.area() || std::abs(rest - got_rest) > 1e-9 * cake.area()) {
      throw std::invalid_argument("condition (b): a knife does not end at its part or complement");
    }
    const Rational loss = knife_loss_bound(part_knives[j], family);
    if (loss.is_unbounded()) throw std::invalid_argument("condition (c): part knife loss is unbounded");
    m = std::max(m, static_cast<int>(std::ceil(loss.value() - 1e-12)));
  }
  const Rational g = Rational::of(1, m);

  Protocol p{agents, family, resolution_for(cake, opts), opts};
  const int c0 = p.pick(0, parts), c1 = p.pick(1, parts);
  if (c0 != c1) {
    p.trace.push_back("1: distinct parts " + std::to_string(c0) + " " + std::to_string(c1));
    return p.give("single_partition", parts[static_cast<std::size_t>(c0)], parts[static_cast<std::size_t>(c1)], g);
  }
  const auto j = static_cast<std::size_t>(c0);
  p.trace.push_back("1: both chose part " + std::to_string(j));
  int both = 0;
  if (auto a = p.region_or_rest("single_partition", cake, parts[j], g, both)) {
    a->trace.push_back("2: part against complement, distinct");
    return *a;
  }
  if (both == 0) return knife_step(p, part_knives[j], "single_partition", g, "3-a");
  return knife_step(p, complement_knives[j], "single_partition", g, "3-b");
}

Allocation archipelago_2(const Region& cake, const Valuations& agents, const PieceFamily& family,
                         const Divide2Options& opts) {
  const auto islands = cake.boxes();
  if (islands.empty()) throw std::invalid_argument("empty archipelago");
  for (std::size_t a = 0; a < islands.size(); ++a) {
    for (std::size_t b = a + 1; b < islands.size(); ++b) {
      const Box& p = islands[a];
      const Box& q = islands[b];
      if (p.xmin <= q.xmax && q.xmin <= p.xmax && p.ymin <= q.ymax && q.ymin <= p.ymax) {
        throw std::invalid_argument("archipelago islands must not touch");
      }
    }
  }
  const bool squares = family.kind == PieceFamily::Kind::squares;
  std::vector<Region> parts;
  std::vector<KnifeSpec> knives, rest_knives;
  for (const auto& b : islands) {
    if (squares && !b.is_square()) throw std::invalid_argument("square archipelago needs square islands");
    parts.push_back(Region::box(b));
    if (squares) {
      knives.push_back({cake, TwinSquares{b}});
    } else {
      knives.push_back({cake, SweepLine{Region::box(b), b.width() >= b.height() ? 0 : 1, false}});
    }
    rest_knives.push_back({cake, SweepLine{subtract(cake, Region::box(b)), 0, false}});
  }
  auto a = single_partition_2(cake, parts, knives, rest_knives, agents, family, opts);
  a.procedure = "archipelago";
  return a;
}

Allocation multiple_partition_2(const Region& cake, const Valuations& agents, double ratio,
                                const Divide2Options& opts) {
  require_two(agents);
  if (ratio < 2) throw std::invalid_argument("multiple partition needs R >= 2");
  const auto boxes = cake.boxes();
  if (boxes.size() != 1 || cake.is_polygon()) throw std::invalid_argument("multiple partition needs a box cake");
  const Box c = boxes.front();
  if (c.long_side() > ratio * c.short_side() * (1 + 1e-12)) throw std::invalid_argument("cake is not R-fat");

  const PieceFamily family = PieceFamily::fat_rects(ratio);
  const Rational g = Rational::of(1, 3);
  const int axis = c.width() >= c.height() ? 0 : 1;
  const Point mid = c.center();
  auto split = [](const Box& b, int ax, double at) {
    return ax == 0 ? std::pair{Box{b.xmin, b.ymin, at, b.ymax}, Box{at, b.ymin, b.xmax, b.ymax}}
                   : std::pair{Box{b.xmin, b.ymin, b.xmax, at}, Box{b.xmin, at, b.xmax, b.ymax}};
  };
  const auto [h0, h1] = split(c, axis, axis == 0 ? mid.x : mid.y);
  const std::vector<Box> halves{h0, h1};
  const std::vector<Region> half_regions{Region::box(h0), Region::box(h1)};

  Protocol p{agents, family, resolution_for(cake, opts), opts};
  const int c0 = p.pick(0, half_regions), c1 = p.pick(1, half_regions);
  if (c0 != c1) {
    p.trace.push_back("1: distinct halves");
    return p.give("multiple_partition", half_regions[static_cast<std::size_t>(c0)],
                  half_regions[static_cast<std::size_t>(c1)], g);
  }
  const auto j = static_cast<std::size_t>(c0);
  const Region& cj = half_regions[j];
  const Region& other = half_regions[1 - j];
  p.trace.push_back("1: both chose half " + std::to_string(j));
  int both = 0;
  if (auto a = p.region_or_rest("multiple_partition", cake, cj, g, both)) {
    a->trace.push_back("2: half against complement, distinct");
    return *a;
  }
  if (both == 1) return knife_step(p, {cake, SweepLine{other, axis, j == 0}}, "multiple_partition", g, "3-b");

  // Quarters of the chosen half, each touching a corner of the cake.
  const Box hj = halves[j];
  const auto [q0, q1] = split(hj, 1 - axis, axis == 0 ? mid.y : mid.x);
  const std::vector<Box> quarters{q0, q1};
  const std::vector<Region> refined{other, Region::box(q0), Region::box(q1)};
  const int r0 = p.pick(0, refined), r1 = p.pick(1, refined);
  if (r0 != r1) {
    p.trace.push_back("3-a-1: distinct refined parts");
    return p.give("multiple_partition", refined[static_cast<std::size_t>(r0)], refined[static_cast<std::size_t>(r1)],
                  g);
  }
  if (r0 == 0) return knife_step(p, {cake, SweepLine{cj, axis, j == 1}}, "multiple_partition", g, "3-a-2");
  const Box q = quarters[static_cast<std::size_t>(r0 - 1)];
  p.trace.push_back("3-a-1: both chose quarter " + std::to_string(r0 - 1));
  if (auto a = p.region_or_rest("multiple_partition", cake, Region::box(q), g, both)) {
    a->trace.push_back("3-a-3: quarter against complement, distinct");
    return *a;
  }
  if (both == 0) {
    const Point corner{q.xmin == c.xmin ? c.xmin : c.xmax, q.ymin == c.ymin ? c.ymin : c.ymax};
    return knife_step(p, {cake, CornerSquare{q, corner}}, "multiple_partition", g, "3-a-4-a");
  }
  const Region rest = subtract(cake, Region::box(q));
  return knife_step(p, {cake, SweepLine{rest, axis, q.center().x > mid.x || q.center().y > mid.y}},
                    "multiple_partition", g, "3-a-4-b");
}

Allocation divide_fat_2(const Region& cake_in, const Valuations& agents, const Divide2Options& opts) {
  require_two(agents);
  if (cake_in.is_empty()) throw std::invalid_argument("empty cake");
  const Region cake = rasterize_cake(cake_in, 64);
  const Raster& ras = *cake.as_raster();
  const auto f = fatness(cake);
  Box inner = f.inner;
  const int k = static_cast<int>(std::lround(inner.width() / ras.cell));
  if (k < 2) throw std::invalid_argument("cake raster is too coarse for its inscribed square");
  const int even = k / 2 * 2;
  inner.xmax = inner.xmin + even * ras.cell;
  inner.ymax = inner.ymin + even * ras.cell;
  const double mid = inner.center().x;
  const Box b1{inner.xmin, inner.ymin, mid, inner.ymax}, b2{mid, inner.ymin, inner.xmax, inner.ymax};
  const Region left = Region::box({ras.origin.x - 1, ras.origin.y - 1, mid, ras.origin.y + ras.ny * ras.cell + 1});
  const Region c1 = intersect(cake, left), c2 = subtract(cake, c1);

  const double r = f.s_out / inner.width();
  const PieceFamily family = PieceFamily::fat_objects(2 * r);
  const KnifeSpec k1{cake, DilatingBoxBridge{b1, c1}}, k2{cake, DilatingBoxBridge{b2, c2}};
  Divide2Options o = opts;
  if (o.resolution <= 0) o.resolution = ras.cell;
  auto a = single_partition_2(cake, {c1, c2}, {k1, k2}, {k2, k1}, agents, family, o);
  a.procedure = "divide_fat";
  a.guarantee = Rational::of(1, 2);
  return a;
}

Allocation rotating_knife_2(const Region& cake, const Valuations& agents, const Divide2Options& opts) {
  require_two(agents);
  const auto* poly = cake.as_polygon();
  if (!poly) throw std::invalid_argument("rotating knife needs a convex polygon cake");
  const auto f = fatness(cake);
  const Point c = f.inner.center();
  const GridDensity& d0 = agents[0].density;
  const double total = integrate(d0, cake);
  auto w = [&](double theta) {
    const auto s = clip_halfplane(*poly, c, theta);
    return (total > 0 ? integrate(d0, s.left) / total : 0.5) - 0.5;
  };
  double lo = 0, hi = std::numbers::pi;
  double glo = w(lo);
  std::vector<std::string> trace;
  double theta = 0;
  if (std::abs(glo) > opts.tol) {
    // w(pi) = -w(0), so the sign changes on [0, pi].
    const bool rising = glo < 0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      theta = (lo + hi) / 2;
      const double g = w(theta);
      if (std::abs(g) <= opts.tol) break;
      if ((g < 0) == rising) lo = theta; else hi = theta;
    }
  }
  const auto s = clip_halfplane(*poly, c, theta);
  trace.push_back("cut angle " + fmt(theta));

  const double r = f.ratio;
  const PieceFamily family = PieceFamily::fat_objects(2 * r);
  Protocol p{agents, family, resolution_for(cake, opts), opts};
  p.trace = trace;
  const int choice = p.pick(1, {s.left, s.right});
  auto a = choice == 0 ? p.give("rotating_knife", s.right, s.left, Rational::of(1, 2))
                       : p.give("rotating_knife", s.left, s.right, Rational::of(1, 2));
  a.epsilon += std::abs(w(theta));
  return a;
}

Allocation envy_from_prop_2(const Allocator& allocator, const Region& cake, const Valuations& agents,
                            const PieceFamily& family, const Divide2Options& opts) {
  require_two(agents);
  Allocation base = allocator(cake, agents);
  if (base.shares.size() != 2) throw std::runtime_error("allocator returned the wrong number of shares");
  auto v = [&](int i, const Region& r) { return integrate(agents[static_cast<std::size_t>(i)].density, r); };
  const auto& u0 = base.shares[0].usable;
  const auto& u1 = base.shares[1].usable;
  const bool envy0 = v(0, u1) > v(0, u0) + opts.tol;
  const bool envy1 = v(1, u0) > v(1, u1) + opts.tol;
  if (!envy0 && !envy1) {
    base.trace.push_back("a: no envy");
    base.procedure = "envy_from_prop";
    return base;
  }
  if (envy0 && envy1) {
    Allocation a = base;
    a.procedure = "envy_from_prop";
    a.shares[0] = {agents[0].id, base.shares[1].piece, u1, v(0, u1), base.shares[1].error};
    a.shares[1] = {agents[1].id, base.shares[0].piece, u0, v(1, u0), base.shares[0].error};
    a.trace.push_back("b: mutual envy, swap");
    return a;
  }
  const int envied = envy0 ? 1 : 0;
  const Region x2 = base.shares[static_cast<std::size_t>(envied)].usable;
  Rational e;
  Allocation sub;
  Divide2Options o = opts;
  o.resolution = 0;
  switch (family.kind) {
    case PieceFamily::Kind::squares: {
      const Box b = x2.bounds();
      sub = generic_knife_2({x2, TwinSquares{b}}, agents, family, o, Rational::of(1, 4));
      e = Rational::of(1, 4);
      break;
    }
    case PieceFamily::Kind::fat_rects:
      if (std::isinf(family.ratio)) {
        const Box b = x2.bounds();
        sub = generic_knife_2({x2, SweepLine{x2, b.width() >= b.height() ? 0 : 1, false}}, agents, family, o,
                              Rational::of(1, 2));
        e = Rational::of(1, 2);
      } else {
        sub = multiple_partition_2(x2, agents, family.ratio, o);
        e = Rational::of(1, 3);
      }
      break;
    case PieceFamily::Kind::fat_objects:
      sub = divide_fat_2(x2, agents, o);
      e = Rational::of(1, 2);
      break;
    default:
      throw std::invalid_argument("no envy-free sub-procedure for family " + family.name());
  }
  sub.procedure = "envy_from_prop";
  sub.guarantee = Rational::of(base.guarantee.num * e.num, base.guarantee.den * e.den);
  sub.epsilon = std::max(sub.epsilon, base.epsilon);
  std::vector<std::string> trace = base.trace;
  trace.push_back("c: agent " + agents[static_cast<std::size_t>(1 - envied)].id + " envies, re-divide the envied piece");
  trace.insert(trace.end(), sub.trace.begin(), sub.trace.end());
  sub.trace = std::move(trace);
  return sub;
}

}  // namespace geocake
