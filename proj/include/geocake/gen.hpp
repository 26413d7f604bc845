#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geocake/geometry.hpp"
#include "geocake/io.hpp"
#include "geocake/measure.hpp"

namespace geocake {

// Constant density on a grid of square cells over b, cells along the longer side.
GridDensity uniform_density(const Box& b, int cells);

// Piecewise-constant density with some empty cells and a few hot spots,
// normalised on the cake.
GridDensity random_density(std::mt19937_64& rng, const Region& cake, int cells = 8);
std::vector<AgentValuation> random_agents(std::mt19937_64& rng, const Region& cake, int n, int cells = 8);

Region raster_polygon(const ConvexPoly& poly, int cells);
Region raster_pentagon(int cells = 48);
Region raster_ellipse(int cells = 48);
// Union of a few overlapping discs on a grid; fat but irregular.
Region raster_blob(std::mt19937_64& rng, int cells = 48);

struct GenOptions {
  std::uint64_t seed = 1;
  std::string cake = "square";  // square | rect | archipelago | raster | convex_polygon
  std::string shape = "pentagon";  // raster cakes: pentagon | ellipse | blob
  std::string family = "squares";
  double ratio = 0;   // fat families; 0 leaves fat_objects to the procedure
  double aspect = 2;  // rect cakes
  int islands = 2;    // archipelago cakes
  int agents = 2;
  int cells = 8;      // density cells along the cake's longer side
};

Instance generate_instance(const GenOptions& opts);

}  // namespace geocake
