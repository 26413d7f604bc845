#pragma once

#include <random>
#include <vector>

#include "geocake/gen.hpp"
#include "geocake/geometry.hpp"
#include "geocake/measure.hpp"

namespace geocake::testing {

inline std::vector<AgentValuation> uniform_agents(const Region& cake, int n) {
  std::vector<AgentValuation> out;
  for (int i = 0; i < n; ++i) out.push_back({"agent" + std::to_string(i), normalize_on(uniform_density(cake.bounds(), 8), cake)});
  return out;
}

// Density with all its mass in one cell of a cells×cells grid over b.
inline GridDensity pool(const Box& b, int cells, int i, int j) {
  GridDensity base = uniform_density(b, cells);
  std::vector<double> w(base.weights().size(), 0.0);
  w[static_cast<std::size_t>(j) * base.nx() + i] = 1.0;
  return normalize(GridDensity(base.origin(), base.cell(), base.nx(), base.ny(), std::move(w)));
}

}  // namespace geocake::testing
