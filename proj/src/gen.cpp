#include "geocake/gen.hpp"

#include <cmath>
#include <stdexcept>

namespace geocake {

GridDensity uniform_density(const Box& b, int cells) {
  const double cell = std::max(b.width(), b.height()) / cells;
  const int nx = std::max(1, static_cast<int>(std::ceil(b.width() / cell - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(b.height() / cell - 1e-9)));
  return {{b.xmin, b.ymin}, cell, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 1.0)};
}

GridDensity random_density(std::mt19937_64& rng, const Region& cake, int cells) {
  const Box b = cake.bounds();
  GridDensity base = uniform_density(b, cells);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> w(base.weights().size());
  for (auto& x : w) x = u(rng) < 0.25 ? 0.0 : u(rng);
  for (int k = 0; k < 2; ++k) w[rng() % w.size()] += 4 * u(rng);
  GridDensity d(base.origin(), base.cell(), base.nx(), base.ny(), std::move(w));
  if (integrate(d, cake) <= 0) d = base;
  return normalize_on(d, cake);
}

std::vector<AgentValuation> random_agents(std::mt19937_64& rng, const Region& cake, int n, int cells) {
  std::vector<AgentValuation> out;
  for (int i = 0; i < n; ++i) out.push_back({"agent" + std::to_string(i), random_density(rng, cake, cells)});
  return out;
}

Region raster_polygon(const ConvexPoly& poly, int cells) {
  const Region p = Region::polygon(poly.vertices);
  const Box b = p.bounds();
  const double cell = std::max(b.width(), b.height()) / cells;
  const int nx = static_cast<int>(std::ceil(b.width() / cell - 1e-9));
  const int ny = static_cast<int>(std::ceil(b.height() / cell - 1e-9));
  return Region::raster(rasterize(p, {b.xmin, b.ymin}, cell, nx, ny));
}

Region raster_pentagon(int cells) { return raster_polygon(regular_polygon({0, 0}, 1, 1, 5, 0.3), cells); }
Region raster_ellipse(int cells) { return raster_polygon(regular_polygon({0, 0}, 1.4, 1, 64), cells); }

Region raster_blob(std::mt19937_64& rng, int cells) {
  std::uniform_real_distribution<double> u(0, 1);
  Raster r = Raster::blank({0, 0}, 1.0 / cells, cells, cells);
  struct Disc {
    double x, y, rad;
  };
  std::vector<Disc> discs{{0.5, 0.5, 0.3}};
  for (int k = 0; k < 2; ++k) discs.push_back({0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng), 0.15 + 0.1 * u(rng)});
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const Point p = r.cell_center(i, j);
      for (const auto& d : discs) {
        if (std::hypot(p.x - d.x, p.y - d.y) <= d.rad) r.set(i, j, true);
      }
    }
  }
  return Region::raster(std::move(r));
}

Instance generate_instance(const GenOptions& o) {
  if (o.agents < 1) throw std::invalid_argument("at least one agent");
  std::mt19937_64 rng(o.seed);
  Instance in;
  in.cake_kind = o.cake;
  if (o.cake == "square") {
    in.cake = Region::box({0, 0, 1, 1});
  } else if (o.cake == "rect") {
    in.cake = Region::box({0, 0, o.aspect, 1});
  } else if (o.cake == "archipelago") {
    std::vector<Box> islands;
    const bool squares = o.family == "squares";
    std::uniform_real_distribution<double> u(0.4, 1.0);
    double x = 0;
    for (int k = 0; k < o.islands; ++k) {
      const double w = u(rng), h = squares ? w : u(rng);
      islands.push_back({x, 0, x + w, h});
      x += w + 0.25;
    }
    in.cake = Region::rectilinear(islands);
  } else if (o.cake == "raster") {
    if (o.shape == "pentagon") {
      in.cake = raster_pentagon();
    } else if (o.shape == "ellipse") {
      in.cake = raster_ellipse();
    } else if (o.shape == "blob") {
      in.cake = raster_blob(rng);
    } else {
      throw std::invalid_argument("unknown raster shape " + o.shape);
    }
  } else if (o.cake == "convex_polygon") {
    std::uniform_real_distribution<double> u(0, 1);
    in.cake = Region::polygon(regular_polygon({0, 0}, 1, 0.8 + 0.4 * u(rng), 5 + static_cast<int>(rng() % 4), u(rng)).vertices);
  } else {
    throw std::invalid_argument("unknown cake kind " + o.cake);
  }
  in.family = parse_family_name(o.family, o.ratio);
  in.fatness_given = !(o.family == "fat_objects" && o.ratio == 0);
  in.agents = random_agents(rng, in.cake, o.agents, o.cells);
  return in;
}

}  // namespace geocake
