#include "geocake/knives.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "geocake/cover.hpp"

namespace geocake {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};

double reach(Point c, const Box& b) {
  double r = 0;
  for (double x : {b.xmin, b.xmax}) {
    for (double y : {b.ymin, b.ymax}) r = std::max(r, std::hypot(x - c.x, y - c.y));
  }
  return r * (1 + 1e-9) + 1e-12;
}

// target ∩ ball(c, r): Euclidean on raster cell centres, max-norm otherwise.
Region ball(const Region& target, Point c, double r) {
  if (target.is_empty() || !(r > 0)) return {};
  if (const auto* ras = target.as_raster()) {
    Raster out = Raster::blank(ras->origin, ras->cell, ras->nx, ras->ny);
    for (int j = 0; j < ras->ny; ++j) {
      for (int i = 0; i < ras->nx; ++i) {
        if (!ras->at(i, j)) continue;
        const Point p = ras->cell_center(i, j);
        out.set(i, j, std::hypot(p.x - c.x, p.y - c.y) < r);
      }
    }
    return Region::raster(std::move(out));
  }
  if (target.is_polygon()) throw std::invalid_argument("bridge knives need a raster or box-like target");
  return intersect(target, Region::box({c.x - r, c.y - r, c.x + r, c.y + r}));
}

Box scaled_twin_low(const Box& b, double t) { return {b.xmin, b.ymin, b.xmin + t * b.width(), b.ymin + t * b.height()}; }
Box scaled_twin_high(const Box& b, double t) { return {b.xmax - t * b.width(), b.ymax - t * b.height(), b.xmax, b.ymax}; }

Region piece_at(const Region& cake, const KnifeShape& shape, double t) {
  return std::visit(
      Overloaded{
          [&](const SweepLine& s) -> Region {
            if (s.region.is_empty()) return {};
            const Box b = s.region.bounds();
            const double lo = s.axis == 0 ? b.xmin : b.ymin;
            const double hi = s.axis == 0 ? b.xmax : b.ymax;
            const double cut = s.reverse ? hi - t * (hi - lo) : lo + t * (hi - lo);
            const double a0 = s.reverse ? cut : lo - 1, a1 = s.reverse ? hi + 1 : cut;
            const Box h = s.axis == 0 ? Box{a0, b.ymin - 1, a1, b.ymax + 1} : Box{b.xmin - 1, a0, b.xmax + 1, a1};
            return intersect(s.region, Region::box(h));
          },
          [&](const CornerSquare& s) -> Region {
            return intersect(cake, Region::box(dilate(s.limit, t, s.corner)));
          },
          [&](const TwinSquares& s) -> Region {
            return intersect(cake, Region::rectilinear({scaled_twin_low(s.box, t), scaled_twin_high(s.box, t)}));
          },
          [&](const QuadSquares& s) -> Region {
            std::vector<Box> boxes;
            for (const auto& q : s.squares) {
              boxes.push_back(scaled_twin_low(q, t));
              boxes.push_back(scaled_twin_high(q, t));
            }
            return intersect(s.parent, Region::rectilinear(std::move(boxes)));
          },
          [&](const GrowingDiscBridge& s) -> Region {
            const double r = t * reach(s.center, s.target.bounds());
            return unite(s.start, ball(s.target, s.center, r));
          },
          [&](const DilatingBoxBridge& s) -> Region {
            const Point c = s.inner.center();
            if (t <= 0.5) return intersect(cake, Region::box(dilate(s.inner, 2 * t, c)));
            const double r = (2 * t - 1) * reach(c, s.target.bounds());
            return unite(intersect(cake, Region::box(s.inner)), ball(s.target, c, r));
          },
          [&](const ThreePhaseFat& s) -> Region {
            const Point c = s.sub.center();
            if (t <= 1.0 / 3) return intersect(s.parent, Region::box(dilate(s.sub, 3 * t, c)));
            if (t <= 2.0 / 3) {
              const Region open = subtract(s.parent, Region::rectilinear(s.rest));
              const double r = (3 * t - 1) * reach(c, s.parent.bounds());
              return unite(intersect(s.parent, Region::box(s.sub)), ball(open, c, r));
            }
            const double g = 3 * (1 - t);
            std::vector<Box> shrunk;
            for (const auto& b : s.rest) shrunk.push_back(dilate(b, g, s.center));
            return subtract(s.parent, Region::rectilinear(std::move(shrunk)));
          },
          [&](const OpposingStrips& s) -> Region {
            const double w = t * s.box.width();
            return intersect(cake, Region::rectilinear({{s.box.xmin, s.box.ymin, s.box.xmin + w, s.box.ymax},
                                                        {s.box.xmax - w, s.box.ymin, s.box.xmax, s.box.ymax}}));
          },
      },
      shape);
}

}  // namespace

std::string KnifeSpec::name() const {
  static const char* names[] = {"sweep_line",          "corner_square",       "twin_squares",    "quad_squares",
                                "growing_disc_bridge", "dilating_box_bridge", "three_phase_fat", "opposing_strips"};
  return names[shape.index()];
}

Region knife_start(const KnifeSpec& spec) {
  if (const auto* g = std::get_if<GrowingDiscBridge>(&spec.shape)) return g->start;
  return {};
}

Region knife_end(const KnifeSpec& spec) {
  return std::visit(Overloaded{
                        [](const SweepLine& s) { return s.region; },
                        [&](const CornerSquare& s) { return intersect(spec.cake, Region::box(s.limit)); },
                        [&](const TwinSquares& s) { return intersect(spec.cake, Region::box(s.box)); },
                        [](const QuadSquares& s) { return s.parent; },
                        [](const GrowingDiscBridge& s) { return unite(s.start, s.target); },
                        [](const DilatingBoxBridge& s) { return s.target; },
                        [](const ThreePhaseFat& s) { return s.parent; },
                        [&](const OpposingStrips& s) { return intersect(spec.cake, Region::box(s.box)); },
                    },
                    spec.shape);
}

KnifeEval eval_knife(const KnifeSpec& spec, double t) {
  if (!(t >= 0 && t <= 1)) throw std::invalid_argument("knife time outside [0,1]");
  KnifeEval e;
  e.t = t;
  e.piece = piece_at(spec.cake, spec.shape, t);
  e.complement = subtract(spec.cake, e.piece);
  return e;
}

SubcubeGrid subcube_grid(const Region& cake, int m) {
  if (m < 2 || m > 3) throw std::invalid_argument("sub-cube grids support m = 2 or 3");
  const auto f = fatness(cake);
  Box outer = f.inner;
  if (const auto* r = cake.as_raster()) {
    const int k = static_cast<int>(std::lround(outer.width() / r->cell));
    const int used = k / m * m;
    if (used < m) throw std::invalid_argument("inscribed square is too small for the sub-cube grid");
    outer.xmax = outer.xmin + used * r->cell;
    outer.ymax = outer.ymin + used * r->cell;
  }
  const double s = outer.width() / m;
  auto cube = [&](int i, int j) {
    return Box{outer.xmin + i * s, outer.ymin + j * s, outer.xmin + (i + 1) * s, outer.ymin + (j + 1) * s};
  };
  SubcubeGrid g{outer, {}, outer.center()};
  if (m == 2) {
    g.cubes = {cube(0, 0), cube(1, 0), cube(0, 1), cube(1, 1)};
  } else {
    g.cubes = {cube(0, 0), cube(2, 0), cube(0, 2), cube(2, 2), cube(1, 0),
               cube(0, 1), cube(2, 1), cube(1, 2), cube(1, 1)};
  }
  return g;
}

KnifeSpec three_phase_fat(const Region& cake, int grid_m, int subcube_index) {
  const auto g = subcube_grid(cake, grid_m);
  if (subcube_index < 0 || subcube_index + 1 >= static_cast<int>(g.cubes.size())) {
    throw std::invalid_argument("sub-cube index must leave at least one cube behind");
  }
  ThreePhaseFat k{cake, g.cubes[static_cast<std::size_t>(subcube_index)],
                  std::vector<Box>(g.cubes.begin() + subcube_index + 1, g.cubes.end()), g.center};
  return {cake, k};
}

HalvingResult find_halving_time(const KnifeSpec& spec, const AgentValuation& agent, const PieceFamily& family,
                                const HalvingOptions& opts) {
  double sv_error = 0;
  auto f = [&](double t) {
    const auto e = eval_knife(spec, t);
    const auto a = s_value(agent.density, e.piece, family, opts.resolution);
    const auto b = s_value(agent.density, e.complement, family, opts.resolution);
    sv_error = std::max(sv_error, a.error_bound + b.error_bound);
    return a.value - b.value;
  };
  HalvingResult r;
  double flo = f(0), fhi = f(1);
  if (flo > opts.tol) {
    throw std::domain_error("knife start: agent " + agent.id + " values K(0) above its complement");
  }
  if (fhi < -opts.tol) {
    throw std::domain_error("knife end: agent " + agent.id + " values K(1) below its complement");
  }
  if (std::abs(flo) <= opts.tol) {
    r.t = 0, r.f = flo, r.lo = 0, r.hi = 0, r.search_error = sv_error;
    return r;
  }
  double lo = 0, hi = 1;
  bool hit = std::abs(fhi) <= opts.tol;
  double tm = 1, fm = fhi;
  while (!hit && hi - lo > opts.time_tol) {
    tm = (lo + hi) / 2;
    fm = f(tm);
    ++r.iterations;
    if (std::abs(fm) <= opts.tol) {
      hit = true;
    } else if (fm < 0) {
      lo = tm, flo = fm;
    } else {
      hi = tm, fhi = fm;
    }
  }
  if (hit) {
    r.t = tm, r.f = fm, r.lo = tm, r.hi = tm;
    r.search_error = sv_error;
    return r;
  }
  const bool take_hi = std::abs(fhi) <= std::abs(flo);
  r.t = take_hi ? hi : lo;
  r.f = take_hi ? fhi : flo;
  r.lo = lo, r.hi = hi;
  r.search_error = sv_error + (fhi - flo);
  return r;
}

Rational knife_loss_bound(const KnifeSpec& spec, const PieceFamily& family) {
  std::vector<double> ts;
  for (int k = 0; k <= 32; ++k) ts.push_back(k / 32.0);
  for (int k = 4; k <= 12; ++k) {
    ts.push_back(std::ldexp(1.0, -k));
    ts.push_back(1 - std::ldexp(1.0, -k));
  }
  auto loss_at = [&](double t) -> std::optional<int> {
    const auto e = eval_knife(spec, t);
    const auto a = cover_number(e.piece, family);
    const auto b = cover_number(e.complement, family);
    if (!a || !b) return std::nullopt;
    return *a + *b;
  };
  int worst = 0;
  for (double t : ts) {
    const auto l = loss_at(t);
    if (!l) return Rational::unbounded();
    worst = std::max(worst, *l);
  }
  // Growth towards either end means the supremum is not attained.
  for (double side : {0.0, 1.0}) {
    const double near8 = std::abs(side - std::ldexp(1.0, -8));
    const double near12 = std::abs(side - std::ldexp(1.0, -12));
    if (*loss_at(near12) > *loss_at(near8)) return Rational::unbounded();
  }
  return Rational::of(worst, 1);
}

SGoodReport check_s_good(const KnifeSpec& spec, const PieceFamily& family, int samples, double delta,
                         double epsilon, Exec exec) {
  if (samples < 2) throw std::invalid_argument("check_s_good needs at least two samples");
  const Box b = spec.cake.bounds();
  const double resolution = std::max(b.width(), b.height()) / 256;

  std::vector<GridDensity> battery;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0, 1);
  const int g = 8;
  const double cell = std::max(b.width(), b.height()) / g;
  battery.push_back(normalize_on(GridDensity({b.xmin, b.ymin}, cell, g, g, std::vector<double>(g * g, 1.0)), spec.cake));
  for (int k = 0; k < 5; ++k) {
    std::vector<double> w(g * g);
    for (auto& x : w) x = u(rng) < 0.2 ? 0.0 : u(rng);
    w[static_cast<std::size_t>(k * 7 % (g * g))] += 1.0;
    GridDensity d({b.xmin, b.ymin}, cell, g, g, std::move(w));
    if (integrate(d, spec.cake) > 0) battery.push_back(normalize_on(d, spec.cake));
  }

  struct Row {
    double area = 0, value = 0, t = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int i = 0; i < samples; ++i) {
    const double t0 = static_cast<double>(i) / (samples - 1);
    const double t1 = std::min(1.0, t0 + delta);
    const auto e0 = eval_knife(spec, t0), e1 = eval_knife(spec, t1);
    Row row{std::abs(e1.piece.area() - e0.piece.area()), 0, t0};
    for (const auto& d : battery) {
      const double a = s_value(d, e1.piece, family, resolution, Exec::serial).value -
                       s_value(d, e0.piece, family, resolution, Exec::serial).value;
      const double c = s_value(d, e1.complement, family, resolution, Exec::serial).value -
                       s_value(d, e0.complement, family, resolution, Exec::serial).value;
      row.value = std::max({row.value, std::abs(a), std::abs(c)});
    }
    rows[static_cast<std::size_t>(i)] = row;
  }
  SGoodReport rep;
  rep.densities = static_cast<int>(battery.size());
  for (const auto& row : rows) {
    rep.area_modulus = std::max(rep.area_modulus, row.area);
    if (row.value > rep.value_modulus) {
      rep.value_modulus = row.value;
      rep.worst_t = row.t;
    }
  }
  rep.pass = rep.value_modulus <= epsilon;
  return rep;
}

}  // namespace geocake
