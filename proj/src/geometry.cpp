#include "geocake/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace geocake {

namespace {

constexpr double kSnap = 1e-12;

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(std::span<const Point> v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return s / 2;
}

// Drops repeated and collinear vertices.
std::vector<Point> tidy(std::vector<Point> v) {
  const double scale = [&] {
    double m = 0;
    for (const auto& p : v) m = std::max({m, std::abs(p.x), std::abs(p.y)});
    return std::max(m, 1.0);
  }();
  const double eps = 1e-12 * scale;
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const Point& a = v[(i + v.size() - 1) % v.size()];
      const Point& b = v[i];
      const Point& c = v[(i + 1) % v.size()];
      const bool dup = std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps;
      if (dup || std::abs(cross(a, b, c)) <= eps * scale) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) v.clear();
  return v;
}

// Sorted, de-duplicated coordinates with near-equal values merged.
std::vector<double> snap_coords(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > kSnap * (1 + std::abs(x))) out.push_back(x);
  }
  return out;
}

int coord_index(const std::vector<double>& v, double x) {
  auto it = std::lower_bound(v.begin(), v.end(), x - kSnap * (1 + std::abs(x)));
  return static_cast<int>(it - v.begin());
}

template <class Filled>
std::vector<Box> cells_to_boxes(int nx, int ny, Filled filled, const std::vector<double>& xs,
                                const std::vector<double>& ys) {
  // Row runs, then stack identical runs of consecutive rows.
  std::vector<Box> out;
  std::map<std::pair<int, int>, int> open;  // run -> starting row
  for (int j = 0; j <= ny; ++j) {
    std::map<std::pair<int, int>, int> next;
    if (j < ny) {
      int i = 0;
      while (i < nx) {
        if (!filled(i, j)) { ++i; continue; }
        int k = i;
        while (k < nx && filled(k, j)) ++k;
        auto key = std::make_pair(i, k);
        auto it = open.find(key);
        next[key] = it != open.end() ? it->second : j;
        if (it != open.end()) open.erase(it);
        i = k;
      }
    }
    for (const auto& [run, j0] : open) {
      out.push_back({xs[run.first], ys[j0], xs[run.second], ys[j]});
    }
    open = std::move(next);
  }
  return out;
}

std::vector<Box> nonempty_boxes(std::span<const Box> in) {
  std::vector<Box> out;
  for (const auto& b : in) {
    if (!b.empty()) out.push_back(b);
  }
  return out;
}

Region from_disjoint(std::vector<Box> boxes);

}  // namespace

double Box::long_side() const { return std::max(width(), height()); }
double Box::short_side() const { return std::min(width(), height()); }

bool Box::is_square(double tol) const {
  return std::abs(width() - height()) <= tol * std::max(1.0, long_side());
}

bool Box::contains(const Box& o, double tol) const {
  return o.xmin >= xmin - tol && o.ymin >= ymin - tol && o.xmax <= xmax + tol && o.ymax <= ymax + tol;
}

bool Box::contains(Point p, double tol) const {
  return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
}

Box intersect(const Box& a, const Box& b) {
  Box r{std::max(a.xmin, b.xmin), std::max(a.ymin, b.ymin), std::min(a.xmax, b.xmax),
        std::min(a.ymax, b.ymax)};
  if (r.empty()) return {};
  return r;
}

bool interiors_overlap(const Box& a, const Box& b) { return !intersect(a, b).empty(); }

Box bounding_box(std::span<const Box> boxes) {
  Box r{};
  bool first = true;
  for (const auto& b : boxes) {
    if (b.empty()) continue;
    if (first) {
      r = b;
      first = false;
      continue;
    }
    r.xmin = std::min(r.xmin, b.xmin);
    r.ymin = std::min(r.ymin, b.ymin);
    r.xmax = std::max(r.xmax, b.xmax);
    r.ymax = std::max(r.ymax, b.ymax);
  }
  return r;
}

Raster Raster::blank(Point origin, double cell, int nx, int ny) {
  if (!(cell > 0) || nx < 0 || ny < 0) throw std::invalid_argument("raster needs h > 0");
  Raster r;
  r.origin = origin;
  r.cell = cell;
  r.nx = nx;
  r.ny = ny;
  r.cells.assign(static_cast<std::size_t>(nx) * ny, 0);
  return r;
}

Box Raster::cell_box(int i, int j) const {
  return {origin.x + i * cell, origin.y + j * cell, origin.x + (i + 1) * cell, origin.y + (j + 1) * cell};
}

Point Raster::cell_center(int i, int j) const {
  return {origin.x + (i + 0.5) * cell, origin.y + (j + 0.5) * cell};
}

std::size_t Raster::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

bool Raster::same_grid(const Raster& o) const {
  return nx == o.nx && ny == o.ny && cell == o.cell && origin == o.origin;
}

Box Raster::extent() const { return {origin.x, origin.y, origin.x + nx * cell, origin.y + ny * cell}; }

std::vector<Box> Raster::row_runs() const {
  std::vector<Box> out;
  for (int j = 0; j < ny; ++j) {
    int i = 0;
    while (i < nx) {
      if (!at(i, j)) { ++i; continue; }
      int k = i;
      while (k < nx && at(k, j)) ++k;
      out.push_back({origin.x + i * cell, origin.y + j * cell, origin.x + k * cell, origin.y + (j + 1) * cell});
      i = k;
    }
  }
  return out;
}

// ---- Region -------------------------------------------------------------

namespace {

Region from_disjoint(std::vector<Box> boxes) {
  boxes = nonempty_boxes(boxes);
  if (boxes.empty()) return {};
  if (boxes.size() == 1) return Region::box(boxes.front());
  return Region::rectilinear(std::move(boxes));
}

}  // namespace

Region Region::box(const Box& b) {
  if (b.empty()) return {};
  return Region(Shape{b});
}

Region Region::rectilinear(std::vector<Box> boxes) {
  boxes = nonempty_boxes(boxes);
  if (boxes.empty()) return {};
  if (boxes.size() == 1) return Region(Shape{boxes.front()});
  bool disjoint = true;
  for (std::size_t a = 0; a < boxes.size() && disjoint; ++a) {
    for (std::size_t b = a + 1; b < boxes.size(); ++b) {
      if (interiors_overlap(boxes[a], boxes[b])) {
        disjoint = false;
        break;
      }
    }
  }
  if (!disjoint) boxes = combine_boxes(boxes, {}, BoolOp::unite);
  if (boxes.size() == 1) return Region(Shape{boxes.front()});
  return Region(Shape{Rectilinear{std::move(boxes)}});
}

Region Region::raster(Raster r) {
  if (!(r.cell > 0)) throw std::invalid_argument("raster needs h > 0");
  if (r.cells.size() != static_cast<std::size_t>(r.nx) * r.ny) throw std::invalid_argument("raster size mismatch");
  if (r.count() == 0) return {};
  return Region(Shape{std::move(r)});
}

Region Region::polygon(std::vector<Point> v) {
  if (v.size() > kMaxPolygonVertices) throw std::invalid_argument("polygon has too many vertices");
  v = tidy(std::move(v));
  if (v.size() < 3) throw std::invalid_argument("degenerate polygon");
  if (signed_area(v) < 0) std::reverse(v.begin(), v.end());
  if (!is_convex_ccw(v)) throw std::invalid_argument("polygon is not convex");
  return Region(Shape{ConvexPoly{std::move(v)}});
}

Region Region::polygon_or_empty(std::vector<Point> v, double reference_area) {
  v = tidy(std::move(v));
  if (v.size() < 3 || std::abs(signed_area(v)) <= 1e-13 * reference_area) return {};
  return polygon(std::move(v));
}

bool Region::is_empty() const {
  if (const auto* r = std::get_if<Rectilinear>(&shape_)) return r->boxes.empty();
  return false;
}

double Region::area() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s.area();
        } else if constexpr (std::is_same_v<T, Rectilinear>) {
          double a = 0;
          for (const auto& b : s.boxes) a += b.area();
          return a;
        } else if constexpr (std::is_same_v<T, Raster>) {
          return static_cast<double>(s.count()) * s.cell * s.cell;
        } else {
          return signed_area(s.vertices);
        }
      },
      shape_);
}

Box Region::bounds() const {
  return std::visit(
      [](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s;
        } else if constexpr (std::is_same_v<T, Rectilinear>) {
          return bounding_box(s.boxes);
        } else if constexpr (std::is_same_v<T, Raster>) {
          int i0 = s.nx, i1 = -1, j0 = s.ny, j1 = -1;
          for (int j = 0; j < s.ny; ++j) {
            for (int i = 0; i < s.nx; ++i) {
              if (!s.at(i, j)) continue;
              i0 = std::min(i0, i);
              i1 = std::max(i1, i);
              j0 = std::min(j0, j);
              j1 = std::max(j1, j);
            }
          }
          if (i1 < 0) return {};
          return {s.origin.x + i0 * s.cell, s.origin.y + j0 * s.cell, s.origin.x + (i1 + 1) * s.cell,
                  s.origin.y + (j1 + 1) * s.cell};
        } else {
          Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
          for (const auto& p : s.vertices) {
            b.xmin = std::min(b.xmin, p.x);
            b.ymin = std::min(b.ymin, p.y);
            b.xmax = std::max(b.xmax, p.x);
            b.ymax = std::max(b.ymax, p.y);
          }
          return b;
        }
      },
      shape_);
}

bool Region::is_box_like() const {
  return std::holds_alternative<Box>(shape_) || std::holds_alternative<Rectilinear>(shape_);
}

std::vector<Box> Region::boxes() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return {*b};
  if (const auto* r = std::get_if<Rectilinear>(&shape_)) return r->boxes;
  if (const auto* r = std::get_if<Raster>(&shape_)) {
    std::vector<double> xs(r->nx + 1), ys(r->ny + 1);
    for (int i = 0; i <= r->nx; ++i) xs[i] = r->origin.x + i * r->cell;
    for (int j = 0; j <= r->ny; ++j) ys[j] = r->origin.y + j * r->cell;
    return cells_to_boxes(r->nx, r->ny, [&](int i, int j) { return r->at(i, j); }, xs, ys);
  }
  throw std::invalid_argument("polygon region has no box decomposition");
}

// ---- boolean operations ---------------------------------------------------

namespace {

std::vector<std::uint8_t> paint(const std::vector<double>& xs, const std::vector<double>& ys,
                                std::span<const Box> boxes) {
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  std::vector<std::uint8_t> fill(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& b : boxes) {
    if (b.empty()) continue;
    const int i0 = coord_index(xs, b.xmin), i1 = coord_index(xs, b.xmax);
    const int j0 = coord_index(ys, b.ymin), j1 = coord_index(ys, b.ymax);
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) fill[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }
  return fill;
}

}  // namespace

CompressedGrid compress(std::span<const Box> boxes, std::span<const double> extra_xs,
                        std::span<const double> extra_ys) {
  std::vector<double> xs(extra_xs.begin(), extra_xs.end());
  std::vector<double> ys(extra_ys.begin(), extra_ys.end());
  for (const auto& b : boxes) {
    if (b.empty()) continue;
    xs.push_back(b.xmin);
    xs.push_back(b.xmax);
    ys.push_back(b.ymin);
    ys.push_back(b.ymax);
  }
  CompressedGrid g;
  g.xs = snap_coords(std::move(xs));
  g.ys = snap_coords(std::move(ys));
  if (g.xs.size() < 2 || g.ys.size() < 2) {
    g.xs.resize(std::max<std::size_t>(g.xs.size(), 1));
    g.ys.resize(std::max<std::size_t>(g.ys.size(), 1));
    return g;
  }
  g.fill = paint(g.xs, g.ys, boxes);
  return g;
}

std::vector<Box> combine_boxes(std::span<const Box> a, std::span<const Box> b, BoolOp op) {
  std::vector<Box> all;
  all.reserve(a.size() + b.size());
  for (const auto& x : a) all.push_back(x);
  for (const auto& x : b) all.push_back(x);
  const CompressedGrid g = compress(all);
  if (g.nx() <= 0 || g.ny() <= 0) return {};
  const auto fa = paint(g.xs, g.ys, a);
  const auto fb = paint(g.xs, g.ys, b);
  auto filled = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(j) * g.nx() + i;
    const bool x = fa[k] != 0, y = fb[k] != 0;
    switch (op) {
      case BoolOp::unite: return x || y;
      case BoolOp::intersect: return x && y;
      case BoolOp::subtract: return x && !y;
    }
    return false;
  };
  return cells_to_boxes(g.nx(), g.ny(), filled, g.xs, g.ys);
}

std::vector<Box> maximal_rectangles(std::span<const Box> boxes) {
  const CompressedGrid g = compress(boxes);
  const int nx = g.nx(), ny = g.ny();
  std::vector<Box> out;
  if (nx <= 0 || ny <= 0) return out;
  auto row_covers = [&](int j, int i0, int i1) {
    if (j < 0 || j >= ny) return false;
    for (int i = i0; i < i1; ++i) {
      if (!g.filled(i, j)) return false;
    }
    return true;
  };
  std::vector<std::uint8_t> mask(nx);
  for (int j1 = 0; j1 < ny; ++j1) {
    for (int i = 0; i < nx; ++i) mask[i] = g.filled(i, j1);
    for (int j2 = j1; j2 < ny; ++j2) {
      if (j2 > j1) {
        bool any = false;
        for (int i = 0; i < nx; ++i) {
          mask[i] = mask[i] && g.filled(i, j2);
          any = any || mask[i];
        }
        if (!any) break;
      }
      int i = 0;
      while (i < nx) {
        if (!mask[i]) { ++i; continue; }
        int k = i;
        while (k < nx && mask[k]) ++k;
        if (!row_covers(j1 - 1, i, k) && !row_covers(j2 + 1, i, k)) {
          out.push_back({g.xs[i], g.ys[j1], g.xs[k], g.ys[j2 + 1]});
        }
        i = k;
      }
    }
  }
  return out;
}

namespace {

Raster grid_of(const Raster& r) { return Raster::blank(r.origin, r.cell, r.nx, r.ny); }

Region raster_op(const Raster& a, const Raster& b, BoolOp op) {
  Raster out = grid_of(a);
  for (std::size_t k = 0; k < out.cells.size(); ++k) {
    const bool x = a.cells[k] != 0, y = b.cells[k] != 0;
    bool v = false;
    switch (op) {
      case BoolOp::unite: v = x || y; break;
      case BoolOp::intersect: v = x && y; break;
      case BoolOp::subtract: v = x && !y; break;
    }
    out.cells[k] = v ? 1 : 0;
  }
  return Region::raster(std::move(out));
}

Region combine(const Region& a, const Region& b, BoolOp op) {
  if (a.is_box_like() && b.is_box_like()) {
    return from_disjoint(combine_boxes(a.boxes(), b.boxes(), op));
  }
  const Raster* ra = a.as_raster();
  const Raster* rb = b.as_raster();
  if (ra || rb) {
    const Raster& grid = ra ? *ra : *rb;
    const Raster x = ra ? *ra : rasterize_like(a, grid);
    const Raster y = (rb && rb->same_grid(grid)) ? *rb : rasterize_like(b, grid);
    return raster_op(x, y, op);
  }
  // At least one convex polygon and no raster.
  const double ref = std::max(a.area(), b.area());
  if (op == BoolOp::intersect) {
    if (a.is_polygon() && b.is_polygon()) {
      return Region::polygon_or_empty(intersect_convex(a.as_polygon()->vertices, b.as_polygon()->vertices), ref);
    }
    const Region& poly = a.is_polygon() ? a : b;
    const Region& other = a.is_polygon() ? b : a;
    const auto bx = other.boxes();
    if (bx.size() == 1) {
      return Region::polygon_or_empty(intersect_convex(poly.as_polygon()->vertices, box_polygon(bx.front())), ref);
    }
    throw std::invalid_argument("intersection of a polygon with a multi-box region is not representable");
  }
  const double ov = overlap_area(a, b);
  if (op == BoolOp::subtract) {
    if (ov <= 1e-12 * ref) return a;
    if (ov >= b.area() * (1 - 1e-12) && std::abs(a.area() - ov) <= 1e-12 * ref) return {};
    throw std::invalid_argument("difference involving a polygon is not representable");
  }
  if (ov >= a.area() - 1e-12 * ref) return b;
  if (ov >= b.area() - 1e-12 * ref) return a;
  throw std::invalid_argument("union involving a polygon is not representable");
}

}  // namespace

Region intersect(const Region& a, const Region& b) {
  if (a.is_empty() || b.is_empty()) return {};
  return combine(a, b, BoolOp::intersect);
}

Region subtract(const Region& a, const Region& b) {
  if (a.is_empty()) return {};
  if (b.is_empty()) return a;
  return combine(a, b, BoolOp::subtract);
}

Region unite(const Region& a, const Region& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return combine(a, b, BoolOp::unite);
}

double overlap_area(const Region& a, const Region& b) {
  if (a.is_empty() || b.is_empty()) return 0;
  if (!a.is_polygon() && !b.is_polygon()) {
    double s = 0;
    for (const auto& x : a.boxes()) {
      for (const auto& y : b.boxes()) s += intersect(x, y).area();
    }
    return s;
  }
  if (a.is_polygon() && b.is_polygon()) {
    return std::abs(signed_area(intersect_convex(a.as_polygon()->vertices, b.as_polygon()->vertices)));
  }
  const Region& poly = a.is_polygon() ? a : b;
  const Region& other = a.is_polygon() ? b : a;
  double s = 0;
  for (const auto& x : other.boxes()) {
    s += std::abs(signed_area(intersect_convex(poly.as_polygon()->vertices, box_polygon(x))));
  }
  return s;
}

Raster rasterize(const Region& region, Point origin, double cell, int nx, int ny) {
  Raster out = Raster::blank(origin, cell, nx, ny);
  if (region.is_empty()) return out;
  const auto& shape = region.shape();
  if (const auto* src = std::get_if<Raster>(&shape)) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Point c = out.cell_center(i, j);
        const int si = static_cast<int>(std::floor((c.x - src->origin.x) / src->cell));
        const int sj = static_cast<int>(std::floor((c.y - src->origin.y) / src->cell));
        if (si >= 0 && sj >= 0 && si < src->nx && sj < src->ny && src->at(si, sj)) out.set(i, j, true);
      }
    }
    return out;
  }
  if (const auto* poly = std::get_if<ConvexPoly>(&shape)) {
    const Box bb = region.bounds();
    const int j0 = std::max(0, static_cast<int>(std::floor((bb.ymin - origin.y) / cell)));
    const int j1 = std::min(ny - 1, static_cast<int>(std::ceil((bb.ymax - origin.y) / cell)));
    const int i0 = std::max(0, static_cast<int>(std::floor((bb.xmin - origin.x) / cell)));
    const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((bb.xmax - origin.x) / cell)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        if (point_in_convex(poly->vertices, out.cell_center(i, j))) out.set(i, j, true);
      }
    }
    return out;
  }
  // Half-open membership keeps complements of box unions consistent.
  for (const auto& b : region.boxes()) {
    const int i0 = std::max(0, static_cast<int>(std::ceil((b.xmin - origin.x) / cell - 0.5)));
    const int i1 = std::min(nx, static_cast<int>(std::ceil((b.xmax - origin.x) / cell - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((b.ymin - origin.y) / cell - 0.5)));
    const int j1 = std::min(ny, static_cast<int>(std::ceil((b.ymax - origin.y) / cell - 0.5)));
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) out.set(i, j, true);
    }
  }
  return out;
}

Raster rasterize_like(const Region& region, const Raster& grid) {
  return rasterize(region, grid.origin, grid.cell, grid.nx, grid.ny);
}

std::vector<int> square_side_table(const Raster& r) {
  std::vector<int> side(static_cast<std::size_t>(r.nx) * r.ny, 0);
  auto at = [&](int i, int j) -> int {
    if (i >= r.nx || j >= r.ny) return 0;
    return side[static_cast<std::size_t>(j) * r.nx + i];
  };
  for (int j = r.ny - 1; j >= 0; --j) {
    for (int i = r.nx - 1; i >= 0; --i) {
      if (!r.at(i, j)) continue;
      side[static_cast<std::size_t>(j) * r.nx + i] = 1 + std::min({at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)});
    }
  }
  return side;
}

// ---- fatness --------------------------------------------------------------

namespace {

Box outer_square(const Box& bb) {
  const double s = bb.long_side();
  return {bb.xmin, bb.ymin, bb.xmin + s, bb.ymin + s};
}

FatnessReport report_from(double s_in, const Box& inner, const Box& bb, double error) {
  FatnessReport r;
  r.s_in = s_in;
  r.s_out = bb.long_side();
  r.ratio = r.s_out / r.s_in;
  r.error_bound = error;
  r.inner = inner;
  r.outer = outer_square(bb);
  return r;
}

// The lower-left corners admitting a side-s square form the intersection of
// the polygon with its three shifted copies. Degenerate (point) intersections
// count as feasible.
std::vector<Point> corner_set(std::span<const Point> poly, double s) {
  std::vector<Point> acc(poly.begin(), poly.end());
  for (Point d : {Point{s, 0}, Point{0, s}, Point{s, s}}) {
    for (std::size_t i = 0; i < poly.size() && !acc.empty(); ++i) {
      const Point p{poly[i].x - d.x, poly[i].y - d.y};
      const Point q{poly[(i + 1) % poly.size()].x - d.x, poly[(i + 1) % poly.size()].y - d.y};
      const Point n{-(q.y - p.y), q.x - p.x};
      const double len = std::hypot(n.x, n.y);
      acc = clip_convex(acc, n, n.x * p.x + n.y * p.y - 1e-13 * len);
    }
  }
  return acc;
}

}  // namespace

FatnessReport fatness(const Region& region) {
  if (region.is_empty() || !(region.area() > 0)) throw std::invalid_argument("empty region has no fatness");
  const Box bb = region.bounds();
  const auto& shape = region.shape();
  if (const auto* b = std::get_if<Box>(&shape)) {
    const double s = b->short_side();
    return report_from(s, {b->xmin, b->ymin, b->xmin + s, b->ymin + s}, bb, 0);
  }
  if (std::holds_alternative<Rectilinear>(shape)) {
    double best = 0;
    Box inner{};
    for (const auto& m : maximal_rectangles(region.boxes())) {
      const double s = m.short_side();
      if (s > best) {
        best = s;
        inner = {m.xmin, m.ymin, m.xmin + s, m.ymin + s};
      }
    }
    return report_from(best, inner, bb, 0);
  }
  if (const auto* r = std::get_if<Raster>(&shape)) {
    const auto side = square_side_table(*r);
    int best = 0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < side.size(); ++k) {
      if (side[k] > best) {
        best = side[k];
        at = k;
      }
    }
    const int i = static_cast<int>(at % r->nx), j = static_cast<int>(at / r->nx);
    const double s = best * r->cell;
    const Box inner{r->origin.x + i * r->cell, r->origin.y + j * r->cell, r->origin.x + i * r->cell + s,
                    r->origin.y + j * r->cell + s};
    const double ratio = bb.long_side() / s;
    return report_from(s, inner, bb, ratio * 2 * r->cell / s);
  }
  const auto& poly = std::get<ConvexPoly>(shape).vertices;
  double lo = 0, hi = bb.short_side();
  for (int it = 0; it < 80 && hi - lo > 1e-13 * bb.long_side(); ++it) {
    const double mid = (lo + hi) / 2;
    (corner_set(poly, mid).empty() ? hi : lo) = mid;
  }
  Box inner{};
  {
    const auto acc = corner_set(poly, lo);
    Point c{0, 0};
    for (const auto& p : acc) c = {c.x + p.x, c.y + p.y};
    if (!acc.empty()) c = {c.x / static_cast<double>(acc.size()), c.y / static_cast<double>(acc.size())};
    inner = {c.x, c.y, c.x + lo, c.y + lo};
  }
  const double ratio = bb.long_side() / lo;
  return report_from(lo, inner, bb, ratio * (hi - lo) / lo + 1e-12);
}

Box dilate(const Box& box, double factor, Point anchor) {
  if (factor < 0) throw std::invalid_argument("dilation factor must be non-negative");
  return {anchor.x + factor * (box.xmin - anchor.x), anchor.y + factor * (box.ymin - anchor.y),
          anchor.x + factor * (box.xmax - anchor.x), anchor.y + factor * (box.ymax - anchor.y)};
}

// ---- convex polygons ------------------------------------------------------

double polygon_area(std::span<const Point> v) { return std::abs(signed_area(v)); }

bool is_convex_ccw(std::span<const Point> v) {
  if (v.size() < 3) return false;
  double scale = 1;
  for (const auto& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], v[(i + 2) % v.size()]) < -1e-12 * scale * scale) return false;
  }
  return signed_area(v) > 0;
}

std::vector<Point> clip_convex(std::span<const Point> poly, Point normal, double offset) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double dp = normal.x * p.x + normal.y * p.y - offset;
    const double dq = normal.x * q.x + normal.y * q.y - offset;
    if (dp >= 0) out.push_back(p);
    if ((dp >= 0) != (dq >= 0)) {
      const double t = dp / (dp - dq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

std::vector<Point> intersect_convex(std::span<const Point> a, std::span<const Point> b) {
  std::vector<Point> acc(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size() && acc.size() >= 3; ++i) {
    const Point& p = b[i];
    const Point& q = b[(i + 1) % b.size()];
    const Point n{-(q.y - p.y), q.x - p.x};
    acc = clip_convex(acc, n, n.x * p.x + n.y * p.y);
  }
  if (acc.size() < 3) acc.clear();
  return acc;
}

std::vector<Point> box_polygon(const Box& b) {
  return {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}};
}

bool point_in_convex(std::span<const Point> poly, Point p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (cross(poly[i], poly[(i + 1) % poly.size()], p) < 0) return false;
  }
  return true;
}

ConvexPoly regular_polygon(Point center, double rx, double ry, int sides, double phase) {
  ConvexPoly p;
  for (int k = 0; k < sides; ++k) {
    const double a = phase + 2 * std::numbers::pi * k / sides;
    p.vertices.push_back({center.x + rx * std::cos(a), center.y + ry * std::sin(a)});
  }
  return p;
}

HalfplaneSplit clip_halfplane(const ConvexPoly& poly, Point line_point, double line_angle) {
  const Point dir{std::cos(line_angle), std::sin(line_angle)};
  const Point n{-dir.y, dir.x};
  const double off = n.x * line_point.x + n.y * line_point.y;
  const double total = polygon_area(poly.vertices);
  HalfplaneSplit s;
  s.left = Region::polygon_or_empty(clip_convex(poly.vertices, n, off), total);
  s.right = Region::polygon_or_empty(clip_convex(poly.vertices, {-n.x, -n.y}, -off), total);
  return s;
}

}  // namespace geocake
