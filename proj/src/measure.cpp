#include "geocake/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geocake {

GridDensity::GridDensity(Point origin, double cell, int nx, int ny, std::vector<double> weights)
    : origin_(origin), cell_(cell), nx_(nx), ny_(ny), weights_(std::move(weights)) {
  if (!(cell > 0) || nx <= 0 || ny <= 0) throw std::invalid_argument("density grid needs positive size");
  if (weights_.size() != static_cast<std::size_t>(nx) * ny) throw std::invalid_argument("density weight count mismatch");
  corner_mass_.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  const double a = cell * cell;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double w = weight(i, j);
      if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("density weights must be finite and non-negative");
      max_weight_ = std::max(max_weight_, w);
      const auto at = [&](int x, int y) -> double& { return corner_mass_[static_cast<std::size_t>(y) * (nx + 1) + x]; };
      at(i + 1, j + 1) = at(i, j + 1) + at(i + 1, j) - at(i, j) + w * a;
    }
  }
  total_ = corner_mass_.back();
  if (!(total_ > 0)) throw std::invalid_argument("density total must be positive");
}

double GridDensity::cumulative(double x, double y) const {
  const double u = std::clamp((x - origin_.x) / cell_, 0.0, static_cast<double>(nx_));
  const double v = std::clamp((y - origin_.y) / cell_, 0.0, static_cast<double>(ny_));
  const int i = std::min(static_cast<int>(u), nx_ - 1);
  const int j = std::min(static_cast<int>(v), ny_ - 1);
  const double a = u - i, b = v - j;
  const auto c = [&](int x0, int y0) { return corner_mass_[static_cast<std::size_t>(y0) * (nx_ + 1) + x0]; };
  const double base = c(i, j);
  return base + a * (c(i + 1, j) - base) + b * (c(i, j + 1) - base) + a * b * weight(i, j) * cell_ * cell_;
}

double GridDensity::integrate_box(const Box& b) const {
  if (b.empty()) return 0;
  const double v = cumulative(b.xmax, b.ymax) - cumulative(b.xmin, b.ymax) - cumulative(b.xmax, b.ymin) +
                   cumulative(b.xmin, b.ymin);
  return std::max(v, 0.0);
}

GridDensity GridDensity::scaled(double factor) const {
  std::vector<double> w = weights_;
  for (auto& x : w) x *= factor;
  return {origin_, cell_, nx_, ny_, std::move(w)};
}

namespace {

double integrate_polygon(const GridDensity& d, const ConvexPoly& poly) {
  Box bb{poly.vertices[0].x, poly.vertices[0].y, poly.vertices[0].x, poly.vertices[0].y};
  for (const auto& p : poly.vertices) {
    bb.xmin = std::min(bb.xmin, p.x);
    bb.ymin = std::min(bb.ymin, p.y);
    bb.xmax = std::max(bb.xmax, p.x);
    bb.ymax = std::max(bb.ymax, p.y);
  }
  const double h = d.cell();
  const int i0 = std::max(0, static_cast<int>(std::floor((bb.xmin - d.origin().x) / h)));
  const int i1 = std::min(d.nx() - 1, static_cast<int>(std::floor((bb.xmax - d.origin().x) / h)));
  const int j0 = std::max(0, static_cast<int>(std::floor((bb.ymin - d.origin().y) / h)));
  const int j1 = std::min(d.ny() - 1, static_cast<int>(std::floor((bb.ymax - d.origin().y) / h)));
  double sum = 0;
  for (int i = i0; i <= i1; ++i) {
    const double x0 = d.origin().x + i * h;
    auto strip = clip_convex(poly.vertices, {1, 0}, x0);
    strip = clip_convex(strip, {-1, 0}, -(x0 + h));
    if (strip.size() < 3) continue;
    for (int j = j0; j <= j1; ++j) {
      const double w = d.weight(i, j);
      if (w == 0) continue;
      const double y0 = d.origin().y + j * h;
      auto cell = clip_convex(strip, {0, 1}, y0);
      cell = clip_convex(cell, {0, -1}, -(y0 + h));
      if (cell.size() >= 3) sum += w * polygon_area(cell);
    }
  }
  return sum;
}

}  // namespace

double integrate(const GridDensity& density, const Region& region) {
  if (region.is_empty()) return 0;
  if (const auto* p = region.as_polygon()) return integrate_polygon(density, *p);
  if (const auto* r = region.as_raster()) {
    double s = 0;
    for (const auto& b : r->row_runs()) s += density.integrate_box(b);
    return s;
  }
  double s = 0;
  for (const auto& b : region.boxes()) s += density.integrate_box(b);
  return s;
}

GridDensity normalize(const GridDensity& density) {
  if (!(density.total() > 0)) throw std::invalid_argument("cannot normalize a zero density");
  return density.scaled(1.0 / density.total());
}

GridDensity normalize_on(const GridDensity& density, const Region& cake) {
  const double v = integrate(density, cake);
  if (!(v > 0)) throw std::invalid_argument("density has no mass on the cake");
  return density.scaled(1.0 / v);
}

// ---- fixtures ---------------------------------------------------------------

namespace {

struct PoolSpec {
  int x, y;
};

// Unit pools centred on integer points, one density cell each.
GridDensity pool_density(const Box& extent, std::initializer_list<PoolSpec> pools) {
  const int nx = static_cast<int>(std::lround(extent.width())) + 1;
  const int ny = static_cast<int>(std::lround(extent.height())) + 1;
  std::vector<double> w(static_cast<std::size_t>(nx) * ny, 0.0);
  for (const auto& p : pools) w[static_cast<std::size_t>(p.y) * nx + p.x] = 1.0;
  return {{extent.xmin - 0.5, extent.ymin - 0.5}, 1.0, nx, ny, std::move(w)};
}

std::vector<AgentValuation> identical_agents(const GridDensity& d, int n) {
  std::vector<AgentValuation> out;
  for (int k = 0; k < n; ++k) out.push_back({"agent" + std::to_string(k), d});
  return out;
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"fig1_three_pools", "fig8a_four_corners", "fig8b_lshape_three_pools", "fig8c_tshape_rects",
          "fig8d_fatrect_three_pools", "fig9_slim_desert"};
}

Fixture make_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  if (name == "fig1_three_pools") {
    const Box c{0, 0, 20, 20};
    f.cake = Region::box(c);
    f.valuations = identical_agents(pool_density(c, {{3, 3}, {17, 6}, {17, 14}}), 2);
    f.family = PieceFamily::squares();
    f.bound = Rational::of(1, 3);
  } else if (name == "fig8a_four_corners") {
    const Box c{0, 0, 40, 40};
    f.cake = Region::box(c);
    f.valuations = identical_agents(pool_density(c, {{2, 2}, {38, 2}, {2, 38}, {38, 38}}), 2);
    f.family = PieceFamily::squares();
    f.bound = Rational::of(1, 4);
  } else if (name == "fig8b_lshape_three_pools") {
    // Bounded window of the quarter plane; it reaches far past the pools.
    const Box c{0, 0, 80, 80};
    f.cake = Region::box(c);
    f.valuations = identical_agents(pool_density(c, {{2, 2}, {38, 2}, {2, 38}}), 2);
    f.family = PieceFamily::squares();
    f.bound = Rational::of(1, 3);
  } else if (name == "fig8c_tshape_rects") {
    f.cake = Region::rectilinear({{10, 0, 30, 10}, {20, 10, 40, 20}, {0, 20, 35, 30}});
    f.valuations = identical_agents(pool_density({0, 0, 40, 30}, {{28, 2}, {12, 8}, {38, 12}, {2, 22}}), 2);
    f.family = PieceFamily::rectangles();
    f.bound = Rational::of(1, 4);
  } else if (name == "fig8d_fatrect_three_pools") {
    const Box c{0, 0, 50, 30};
    f.cake = Region::box(c);
    f.valuations = identical_agents(pool_density(c, {{2, 2}, {48, 2}, {2, 28}}), 2);
    f.family = PieceFamily::fat_rects(2);
    f.ratios = {2, 3, 5};
    f.bound = Rational::of(1, 3);
  } else if (name == "fig9_slim_desert") {
    return make_slim_desert(3, 4, 0.01, 0.05);
  } else {
    throw std::invalid_argument("unknown fixture: " + name);
  }
  for (auto& v : f.valuations) v.density = normalize_on(v.density, f.cake);
  return f;
}

Fixture make_slim_desert(int n, double ratio, double eps, double delta) {
  if (n < 2) throw std::invalid_argument("slim desert needs n >= 2");
  const double cells_per_unit = 1.0 / delta;
  if (std::abs(cells_per_unit - std::round(cells_per_unit)) > 1e-9) throw std::invalid_argument("1/delta must be an integer");
  if (!(delta < std::pow(1.0 / (n - 1), 0.5))) throw std::invalid_argument("delta too large for the grid bound");
  const int per_unit = static_cast<int>(std::lround(cells_per_unit));
  const int east_cells = static_cast<int>(std::lround(ratio / delta));
  if (std::abs(east_cells * delta - ratio) > 1e-9) throw std::invalid_argument("R must be a multiple of delta");
  const int nx = per_unit + east_cells;
  const int ny = per_unit;
  std::vector<double> w(static_cast<std::size_t>(nx) * ny, 0.0);
  const double west = (n - 1 + eps);  // spread uniformly over the unit square
  for (int j = 0; j < per_unit; ++j) {
    for (int i = 0; i < per_unit; ++i) w[static_cast<std::size_t>(j) * nx + i] = west;
  }
  w[static_cast<std::size_t>(nx - 1)] = (1 - eps) / (delta * delta);
  Fixture f;
  f.name = "fig9_slim_desert";
  f.cake = Region::rectilinear({{0, 0, 1, 1}, {1, 0, 1 + ratio, delta}});
  f.valuations = identical_agents(GridDensity({0, 0}, delta, nx, ny, std::move(w)), n);
  f.family = PieceFamily::fat_objects(std::ceil(std::sqrt(n - 1.0)) * ratio);
  f.ratios = {ratio};
  f.bound = Rational::of(1, n);
  return f;
}

}  // namespace geocake
