#pragma once

#include <string>
#include <vector>

#include "geocake/family.hpp"
#include "geocake/geometry.hpp"
#include "geocake/measure.hpp"
#include "geocake/rational.hpp"

namespace geocake {

struct Share {
  std::string agent;
  Region piece;        // assigned piece
  Region usable;       // family member inside the assigned piece
  double value = 0;    // integral of the agent's density over the usable piece
  double error = 0;    // s_value error bound of the usable piece
  friend bool operator==(const Share&, const Share&) = default;
};

struct Allocation {
  std::string procedure;
  Rational guarantee;  // per-agent value promised, up to epsilon
  PieceFamily family;
  std::vector<Share> shares;  // one per agent, in input order
  double epsilon = 0;         // envy and guarantee slack from tolerances and search errors
  std::vector<std::string> trace;
  bool certified = false;     // the procedure met its own tolerance
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Resolution for s_value calls on a cake: a 256th of its longer side.
double default_resolution(const Region& cake);

Share make_share(const AgentValuation& agent, const Region& piece, const PieceFamily& family, double resolution);

}  // namespace geocake
