#include "geocake/svalue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geocake {

namespace {

bool better(const RectPick& a, const RectPick& b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(a.value), std::abs(b.value)});
  if (a.value > b.value + tol) return true;
  if (b.value > a.value + tol) return false;
  const double aa = a.box.area(), ba = b.box.area();
  if (aa > ba * (1 + 1e-12)) return true;
  if (ba > aa * (1 + 1e-12)) return false;
  if (a.box.xmin != b.box.xmin) return a.box.xmin < b.box.xmin;
  return a.box.ymin < b.box.ymin;
}

// Window positions along one axis where the window value can peak: it is
// piecewise linear between density grid lines.
std::vector<double> window_stops(double lo, double hi, double window, double grid_origin, double h,
                                 double step = 0) {
  std::vector<double> stops{lo, hi};
  const long k0 = static_cast<long>(std::ceil((lo - grid_origin) / h));
  const long k1 = static_cast<long>(std::floor((hi + window - grid_origin) / h));
  for (long k = k0; k <= k1; ++k) {
    const double g = grid_origin + static_cast<double>(k) * h;
    if (g > lo && g < hi) stops.push_back(g);
    if (g - window > lo && g - window < hi) stops.push_back(g - window);
  }
  if (step > 0) {
    for (double p = lo + step; p < hi; p += step) stops.push_back(p);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  return stops;
}

// Windows of the longest admissible length inside one maximal rectangle.
std::vector<Box> windows_in(const GridDensity& d, const Box& m, double ratio, double step = 0) {
  const double s = m.short_side(), l = m.long_side();
  if (l <= ratio * s * (1 + 1e-12)) return {m};
  const double w = ratio * s;
  const bool horizontal = m.width() >= m.height();
  std::vector<Box> out;
  if (horizontal) {
    for (double p : window_stops(m.xmin, m.xmax - w, w, d.origin().x, d.cell(), step)) {
      out.push_back({p, m.ymin, std::min(p + w, m.xmax), m.ymax});
    }
  } else {
    for (double p : window_stops(m.ymin, m.ymax - w, w, d.origin().y, d.cell(), step)) {
      out.push_back({m.xmin, p, m.xmax, std::min(p + w, m.ymax)});
    }
  }
  return out;
}

RectPick best_in(const GridDensity& d, const Box& m, double ratio) {
  RectPick best{{}, -1};
  for (const auto& b : windows_in(d, m, ratio)) {
    const RectPick c{b, d.integrate_box(b)};
    if (best.value < 0 || better(c, best)) best = c;
  }
  return best;
}

SValueResult from_pick(const RectPick& p) {
  if (p.box.empty()) return {};
  return {Region::box(p.box), p.value, 0};
}

SValueResult raster_squares(const GridDensity& d, const Raster& r, Exec exec) {
  const auto side = square_side_table(r);
  const int nrows = r.ny;
  std::vector<RectPick> row_best(static_cast<std::size_t>(nrows), RectPick{{}, -1});
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && nrows > 32)
  for (int j = 0; j < nrows; ++j) {
    RectPick best{{}, -1};
    for (int i = 0; i < r.nx; ++i) {
      const int s = side[static_cast<std::size_t>(j) * r.nx + i];
      if (s == 0) continue;
      const Box c = r.cell_box(i, j);
      const Box sq{c.xmin, c.ymin, c.xmin + s * r.cell, c.ymin + s * r.cell};
      const RectPick p{sq, d.integrate_box(sq)};
      if (best.value < 0 || better(p, best)) best = p;
    }
    row_best[static_cast<std::size_t>(j)] = best;
  }
  RectPick best{{}, -1};
  for (const auto& p : row_best) {
    if (p.value >= 0 && (best.value < 0 || better(p, best))) best = p;
  }
  if (best.value < 0) return {};
  int smax = 0;
  for (int s : side) smax = std::max(smax, s);
  const double h = r.cell, s = smax * h;
  return {Region::box(best.box), best.value, d.max_weight() * (4 * s * h + 4 * h * h)};
}

double pair_value(const GridDensity& d, const Box& a, const Box& b) {
  return d.integrate_box(a) + d.integrate_box(b) - d.integrate_box(intersect(a, b));
}

SValueResult square_pairs(const GridDensity& d, const Region& region, double resolution) {
  if (const auto pair = as_square_pair(region); !pair.empty()) {
    return {region, integrate(d, region), 0};
  }
  const auto boxes = region.boxes();
  std::vector<RectPick> cands;
  for (const auto& m : maximal_rectangles(boxes)) {
    for (const auto& w : windows_in(d, m, 1.0, resolution)) cands.push_back({w, d.integrate_box(w)});
  }
  std::sort(cands.begin(), cands.end(), [](const RectPick& a, const RectPick& b) { return better(a, b); });
  if (cands.size() > 200) cands.resize(200);
  if (cands.empty()) return {};
  double best = cands.front().value;
  std::pair<Box, Box> pick{cands.front().box, cands.front().box};
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      const double v = pair_value(d, cands[a].box, cands[b].box);
      if (v > best * (1 + 1e-12) + 1e-300) {
        best = v;
        pick = {cands[a].box, cands[b].box};
      }
    }
  }
  Region piece = Region::rectilinear({pick.first, pick.second});
  const double value = integrate(d, piece);
  return {piece, value, std::max(0.0, integrate(d, region) - value)};
}

}  // namespace

RectPick best_fat_rect(const GridDensity& density, std::span<const Box> boxes, double ratio, Exec exec) {
  const auto ms = maximal_rectangles(boxes);
  const int n = static_cast<int>(ms.size());
  std::vector<RectPick> per(ms.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && n > 16)
  for (int k = 0; k < n; ++k) per[static_cast<std::size_t>(k)] = best_in(density, ms[static_cast<std::size_t>(k)], ratio);
  RectPick best{{}, -1};
  for (const auto& p : per) {
    if (best.value < 0 || better(p, best)) best = p;
  }
  if (best.value < 0) return {{}, 0};
  return best;
}

std::vector<Box> as_square_pair(const Region& region) {
  if (!region.is_box_like() || region.is_empty()) return {};
  const auto boxes = region.boxes();
  const double area = region.area();
  std::vector<Box> cands;
  for (const auto& m : maximal_rectangles(boxes)) {
    const double s = m.short_side();
    if (m.width() >= m.height()) {
      cands.push_back({m.xmin, m.ymin, m.xmin + s, m.ymax});
      cands.push_back({m.xmax - s, m.ymin, m.xmax, m.ymax});
    } else {
      cands.push_back({m.xmin, m.ymin, m.xmax, m.ymin + s});
      cands.push_back({m.xmin, m.ymax - s, m.xmax, m.ymax});
    }
  }
  const double tol = 1e-10 * area;
  for (std::size_t a = 0; a < cands.size(); ++a) {
    if (std::abs(cands[a].area() - area) <= tol) return {cands[a]};
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      const double u = cands[a].area() + cands[b].area() - intersect(cands[a], cands[b]).area();
      if (std::abs(u - area) <= tol) return {cands[a], cands[b]};
    }
  }
  return {};
}

SValueResult s_value(const GridDensity& density, const Region& region, const PieceFamily& family,
                     double resolution, Exec exec) {
  if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
  if (region.is_empty()) return {};
  switch (family.kind) {
    case PieceFamily::Kind::all_pieces:
      return {region, integrate(density, region), 0};
    case PieceFamily::Kind::squares:
    case PieceFamily::Kind::fat_rects: {
      if (region.is_polygon()) throw std::invalid_argument("rectangle search inside a convex polygon is not supported");
      if (const auto* r = region.as_raster(); r && family.kind == PieceFamily::Kind::squares) {
        return raster_squares(density, *r, exec);
      }
      return from_pick(best_fat_rect(density, region.boxes(), family.ratio, exec));
    }
    case PieceFamily::Kind::fat_objects: {
      const auto f = fatness(region);
      const double slack = region.is_raster() ? f.error_bound : family.ratio * 1e-12;
      if (f.ratio <= family.ratio + slack) return {region, integrate(density, region), 0};
      SValueResult fallback;
      if (const auto* r = region.as_raster()) {
        fallback = raster_squares(density, *r, exec);
      } else if (region.is_polygon()) {
        fallback = {Region::box(f.inner), density.integrate_box(f.inner), 0};
      } else {
        fallback = from_pick(best_fat_rect(density, region.boxes(), family.ratio, exec));
      }
      fallback.error_bound = std::max(0.0, integrate(density, region) - fallback.value);
      return fallback;
    }
    case PieceFamily::Kind::square_pairs:
      if (!region.is_box_like()) throw std::invalid_argument("square pairs need a box-like region");
      return square_pairs(density, region, resolution);
  }
  throw std::logic_error("unknown family");
}

// ---- oracle -----------------------------------------------------------------

namespace {

std::vector<double> refined_axis(std::vector<double> v, int subdivide) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), v.end());
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    for (int s = 0; s < subdivide; ++s) out.push_back(v[k] + (v[k + 1] - v[k]) * s / subdivide);
  }
  if (!v.empty()) out.push_back(v.back());
  return out;
}

bool inside(const Region& region, const Box& b) {
  return overlap_area(Region::box(b), region) >= b.area() * (1 - 1e-12);
}

// Largest extent e among candidates with make(e) inside the region.
template <class Make>
double largest_fitting(const std::vector<double>& lengths, Make make, const Region& region) {
  std::size_t lo = 0, hi = lengths.size();  // lengths[0..lo) fit
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (inside(region, make(lengths[mid]))) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo == 0 ? 0.0 : lengths[lo - 1];
}

std::vector<double> offsets_from(const std::vector<double>& axis, double origin) {
  std::vector<double> out;
  for (double v : axis) {
    if (v - origin > 1e-12) out.push_back(v - origin);
  }
  return out;
}

}  // namespace

SValueResult oracle_s_value(const GridDensity& density, const Region& input, const PieceFamily& family) {
  if (input.is_empty()) return {};
  // Containment tests run against a fixed box decomposition.
  const Region region = input.is_raster() ? Region::rectilinear(input.boxes()) : input;
  if (region.is_polygon()) throw std::invalid_argument("oracle supports box-like and raster regions");
  if (region.area() > 16.0 || density.nx() > 64 || density.ny() > 64) throw std::invalid_argument("instance too large");
  if (family.kind == PieceFamily::Kind::all_pieces) return {input, integrate(density, input), 0};
  const Box bb = region.bounds();
  std::vector<double> xs, ys;
  for (const auto& b : region.boxes()) {
    xs.insert(xs.end(), {b.xmin, b.xmax});
    ys.insert(ys.end(), {b.ymin, b.ymax});
  }
  for (int i = 0; i <= density.nx(); ++i) {
    const double x = density.origin().x + i * density.cell();
    if (x > bb.xmin && x < bb.xmax) xs.push_back(x);
  }
  for (int j = 0; j <= density.ny(); ++j) {
    const double y = density.origin().y + j * density.cell();
    if (y > bb.ymin && y < bb.ymax) ys.push_back(y);
  }
  xs = refined_axis(xs, 4);
  ys = refined_axis(ys, 4);
  double gap = 0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) gap = std::max(gap, xs[k + 1] - xs[k]);
  for (std::size_t k = 0; k + 1 < ys.size(); ++k) gap = std::max(gap, ys[k + 1] - ys[k]);

  const double ratio = family.kind == PieceFamily::Kind::fat_rects ? family.ratio : 1.0;
  std::vector<Box> maximal_squares;
  RectPick best{{}, 0};
  double biggest_side = 0;
  auto consider = [&](const Box& b) {
    if (b.empty()) return;
    const RectPick p{b, density.integrate_box(b)};
    if (p.value > best.value || best.box.empty()) best = p;
    biggest_side = std::max(biggest_side, b.long_side());
  };
  for (double y : ys) {
    for (double x : xs) {
      const Box corner{x, y, x + gap * 1e-6, y + gap * 1e-6};
      if (!inside(region, corner)) continue;
      const auto dxs = offsets_from(xs, x), dys = offsets_from(ys, y);
      if (ratio == 1.0) {
        std::vector<double> sides = dxs;
        sides.insert(sides.end(), dys.begin(), dys.end());
        std::sort(sides.begin(), sides.end());
        sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
        const double s = largest_fitting(sides, [&](double e) { return Box{x, y, x + e, y + e}; }, region);
        if (s > 0) {
          consider({x, y, x + s, y + s});
          maximal_squares.push_back({x, y, x + s, y + s});
        }
        continue;
      }
      for (double w : dxs) {
        const double hmax = largest_fitting(dys, [&](double e) { return Box{x, y, x + w, y + e}; }, region);
        const double h = std::min(hmax, ratio * w);
        if (h > 0 && h * ratio >= w * (1 - 1e-12)) consider({x, y, x + w, y + h});
      }
      for (double h : dys) {
        const double wmax = largest_fitting(dxs, [&](double e) { return Box{x, y, x + e, y + h}; }, region);
        const double w = std::min(wmax, ratio * h);
        if (w > 0 && w * ratio >= h * (1 - 1e-12)) consider({x, y, x + w, y + h});
      }
    }
  }
  const double err = density.max_weight() * (4 * biggest_side * gap + 4 * gap * gap);
  if (family.kind == PieceFamily::Kind::square_pairs) {
    double v = best.value;
    Region piece = best.box.empty() ? Region{} : Region::box(best.box);
    for (std::size_t a = 0; a < maximal_squares.size(); ++a) {
      for (std::size_t b = a + 1; b < maximal_squares.size(); ++b) {
        const double pv = pair_value(density, maximal_squares[a], maximal_squares[b]);
        if (pv > v) {
          v = pv;
          piece = Region::rectilinear({maximal_squares[a], maximal_squares[b]});
        }
      }
    }
    return {piece, v, 2 * err};
  }
  if (family.kind == PieceFamily::Kind::fat_objects) {
    const auto f = fatness(input);
    if (f.ratio <= family.ratio * (1 + 1e-12)) return {input, integrate(density, input), 0};
  }
  if (best.box.empty()) return {};
  return {Region::box(best.box), best.value, err};
}

}  // namespace geocake
