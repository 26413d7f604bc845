#include "geocake/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "geocake/svalue.hpp"

namespace geocake {

namespace {

bool is_rectangle(const Region& r) {
  if (r.is_polygon()) return false;
  const double area = r.area();
  return std::abs(r.bounds().area() - area) <= 1e-9 * std::max(1.0, area);
}

double total_on(const AgentValuation& a, const Region& cake) { return integrate(a.density, cake); }

}  // namespace

bool in_family(const Region& region, const PieceFamily& family) {
  if (region.is_empty()) return true;
  switch (family.kind) {
    case PieceFamily::Kind::all_pieces:
      return true;
    case PieceFamily::Kind::squares:
    case PieceFamily::Kind::fat_rects: {
      if (!is_rectangle(region)) return false;
      const Box b = region.bounds();
      const double ratio = family.kind == PieceFamily::Kind::squares ? 1.0 : family.ratio;
      return std::isinf(ratio) || b.long_side() <= ratio * b.short_side() * (1 + 1e-9);
    }
    case PieceFamily::Kind::square_pairs: {
      if (is_rectangle(region)) return region.bounds().is_square();
      return !region.is_polygon() && !as_square_pair(region).empty();
    }
    case PieceFamily::Kind::fat_objects: {
      const auto f = fatness(region);
      return f.ratio <= family.ratio + f.error_bound + 1e-9;
    }
  }
  return false;
}

Certificate check_envy_free(const Allocation& alloc, const Region& cake, const std::vector<AgentValuation>& agents,
                            const PieceFamily& family, double resolution, double epsilon) {
  if (alloc.shares.size() != agents.size()) throw std::invalid_argument("allocation and agent counts differ");
  const std::size_t n = agents.size();
  Certificate c;
  auto fail = [&](const std::string& clause) {
    if (c.pass) c.failing_clause = clause;
    c.pass = false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (alloc.shares[i].agent != agents[i].id) throw std::invalid_argument("allocation agents do not match");
  }
  const double area_tol = 1e-9 * std::max(1.0, cake.area());

  std::vector<std::vector<SValueResult>> v(n, std::vector<SValueResult>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      v[i][j] = s_value(agents[i].density, alloc.shares[j].piece, family, resolution);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double envy = v[i][j].value - v[i][i].value;
      c.envy_free_at = std::max(c.envy_free_at, envy);
      // Envy below the lattice error of the two recomputed values is not resolved.
      const double slack = v[i][j].error_bound + v[i][i].error_bound;
      if (envy > epsilon + slack) c.envy_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  if (!c.envy_pairs.empty()) fail("envy");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = alloc.shares[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (overlap_area(s.piece, alloc.shares[j].piece) > area_tol) fail("disjointness");
    }
    if (overlap_area(s.piece, cake) < s.piece.area() - area_tol) fail("containment");
    if (overlap_area(s.usable, s.piece) < s.usable.area() - area_tol) fail("usable inside piece");
    const bool member = in_family(s.usable, family);
    c.family_membership.push_back(member);
    if (!member) fail("family membership");
    c.fatness.push_back(s.usable.is_empty() ? FatnessReport{} : fatness(s.usable));
    const double direct = integrate(agents[i].density, s.usable);
    if (std::abs(direct - s.value) > 1e-9 * (1 + std::abs(direct))) fail("reported value");
  }

  c.min_proportionality = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double total = total_on(agents[i], cake);
    const double p = total > 0 ? integrate(agents[i].density, alloc.shares[i].usable) / total : 1.0;
    c.min_proportionality = std::min(c.min_proportionality, p);
  }
  if (n == 0) c.min_proportionality = 0;
  return c;
}

bool check_proportionality(const Allocation& alloc, const Region& cake, const std::vector<AgentValuation>& agents,
                           Rational threshold, double epsilon) {
  if (alloc.shares.empty() || alloc.shares.size() != agents.size()) return threshold.value() <= 0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const double total = total_on(agents[i], cake);
    if (total <= 0) continue;
    if (integrate(agents[i].density, alloc.shares[i].usable) / total < threshold.value() - epsilon) return false;
  }
  return true;
}

namespace {

// Upper bounds of the best family piece on each side of a line, per agent.
struct SideValues {
  const Fixture& fx;
  PieceFamily family;
  double resolution;

  double upper(std::size_t agent, const Region& r) const {
    if (r.is_empty()) return 0;
    const auto sv = s_value(fx.valuations[agent].density, r, family, resolution);
    return sv.value + sv.error_bound;
  }
  Region side(int axis, double c, bool low) const {
    const Box b = fx.cake.bounds();
    Box h = b;
    h.xmin -= 1, h.ymin -= 1, h.xmax += 1, h.ymax += 1;
    if (axis == 0) (low ? h.xmax : h.xmin) = c;
    else (low ? h.ymax : h.ymin) = c;
    return intersect(fx.cake, Region::box(h));
  }
  // Bound for lines strictly between positions a < b.
  double gap_bound(int axis, double a, double b) const {
    const Region lo = side(axis, b, true), hi = side(axis, a, false);
    const double l0 = upper(0, lo), l1 = upper(1, lo), h0 = upper(0, hi), h1 = upper(1, hi);
    return std::max(std::min(l0, h1), std::min(l1, h0));
  }
};

UpperBoundReport two_agent_bound(const Fixture& fx, const PieceFamily& family, double resolution) {
  if (fx.valuations.size() != 2) throw std::invalid_argument("line scan needs two agents");
  if (family.kind == PieceFamily::Kind::square_pairs || family.kind == PieceFamily::Kind::fat_objects ||
      family.kind == PieceFamily::Kind::all_pieces) {
    throw std::invalid_argument("line scan needs axis-parallel rectangle families");
  }
  const Box b = fx.cake.bounds();
  const double spacing = resolution * std::max(b.width(), b.height());
  if (spacing >= fx.valuations[0].density.cell()) throw std::invalid_argument("resolution too coarse to separate pools");
  SideValues sv{fx, family, spacing};
  UpperBoundReport rep;
  rep.fixture = fx.name;
  rep.ratio = family.ratio;
  rep.bound = fx.bound.value();
  double worst = 0;
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = axis == 0 ? b.xmin : b.ymin, hi = axis == 0 ? b.xmax : b.ymax;
    const int steps = static_cast<int>(std::ceil((hi - lo) / spacing));
    std::vector<double> bounds(static_cast<std::size_t>(steps));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < steps; ++i) {
      const double a = lo + (hi - lo) * i / steps, c = lo + (hi - lo) * (i + 1) / steps;
      double g = sv.gap_bound(axis, a, c);
      // Refine gaps whose coarse bound exceeds the claim.
      if (g > rep.bound + 1e-12) {
        const int sub = 8;
        double refined = 0;
        for (int k = 0; k < sub; ++k) {
          refined = std::max(refined, sv.gap_bound(axis, a + (c - a) * k / sub, a + (c - a) * (k + 1) / sub));
        }
        g = std::min(g, refined);
      }
      bounds[static_cast<std::size_t>(i)] = g;
    }
    for (double g : bounds) worst = std::max(worst, g);
  }
  rep.max_min = worst;
  // One pool cell straddling a scan gap is the most a gap can add.
  double pool_cell = 0;
  for (const auto& a : fx.valuations) {
    const double total = integrate(a.density, fx.cake);
    if (total > 0) pool_cell = std::max(pool_cell, a.density.max_weight() * a.density.cell() * a.density.cell() / total);
  }
  rep.lattice_error = pool_cell * spacing / fx.valuations[0].density.cell();
  rep.pass = rep.max_min <= rep.bound + rep.lattice_error + 1e-9;
  rep.detail = "axis-parallel separating lines, spacing " + std::to_string(spacing);
  return rep;
}

UpperBoundReport slim_desert_bound(const Fixture& fx, double resolution) {
  UpperBoundReport rep;
  rep.fixture = fx.name;
  const auto& d = fx.valuations.front().density;
  const int n = static_cast<int>(fx.valuations.size());
  const double r = fx.ratios.front();
  const double cap = fx.family.ratio;
  const double delta = d.cell();
  const double rho = d.weight(0, 0);  // west water per unit area
  rep.ratio = cap;
  rep.bound = fx.bound.value();
  if (resolution >= delta) throw std::invalid_argument("resolution too coarse for the east corridor");

  // A piece reaching the east pool and holding west water has its largest
  // inscribed square Q in the west, and its bounding square spans from Q's
  // left side past x = 1 + R - delta. Fatness then forces Q's side up.
  const double s_min = cap > 1 ? (r - delta) / (cap - 1) : std::numeric_limits<double>::infinity();
  rep.min_bridge_side = s_min;

  // Lattice cross-check of the same bound, and of the per-piece question.
  double lattice_side = std::numeric_limits<double>::infinity();
  double best_ratio = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::lround(1 / resolution));
  for (int si = 1; si <= steps; ++si) {
    const double s = static_cast<double>(si) / steps;
    for (int xi = 0; xi + si <= steps; ++xi) {
      const double x0 = static_cast<double>(xi) / steps;
      const double ratio = (1 + r - delta - x0) / s;
      if (ratio <= cap) lattice_side = std::min(lattice_side, s);
      if (rho * s * s <= 1) best_ratio = std::min(best_ratio, ratio);
    }
  }
  if (lattice_side + 1e-12 < s_min) throw std::logic_error("lattice bridge beats the closed-form bound");

  rep.max_bridges = std::isinf(s_min) ? 0 : static_cast<int>(std::floor(1 / s_min + 1e-12));
  rep.max_bridges *= rep.max_bridges;
  // Agents without a bridge live on west water outside the bridges' squares;
  // east-only pieces hold less than one unit.
  bool feasible = false;
  for (int b = 0; b <= std::min(rep.max_bridges, n); ++b) {
    const double west_left = rho * (1 - b * s_min * s_min);
    if (b == 0 ? n <= rho : n - b <= west_left + 1e-12) feasible = true;
  }
  rep.pass = !feasible;
  rep.max_min = feasible ? 1.0 / n : 0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "bridge square side >= %.4f (lattice %.4f), at most %d bridges; lightest single bridge ratio %.3f vs cap %.3f",
                s_min, lattice_side, rep.max_bridges, best_ratio, cap);
  rep.detail = buf;
  return rep;
}

}  // namespace

std::vector<UpperBoundReport> verify_upper_bound(const Fixture& fixture, double resolution) {
  if (fixture.name == "fig9_slim_desert") return {slim_desert_bound(fixture, resolution)};
  std::vector<UpperBoundReport> out;
  if (fixture.family.kind == PieceFamily::Kind::fat_rects && !fixture.ratios.empty()) {
    for (double r : fixture.ratios) out.push_back(two_agent_bound(fixture, PieceFamily::fat_rects(r), resolution));
  } else {
    out.push_back(two_agent_bound(fixture, fixture.family, resolution));
  }
  return out;
}

}  // namespace geocake
