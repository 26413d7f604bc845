#include "geocake/allocation.hpp"

#include <algorithm>

#include "geocake/svalue.hpp"

namespace geocake {

double default_resolution(const Region& cake) {
  const Box b = cake.bounds();
  return std::max(b.width(), b.height()) / 256;
}

Share make_share(const AgentValuation& agent, const Region& piece, const PieceFamily& family, double resolution) {
  auto sv = s_value(agent.density, piece, family, resolution);
  return {agent.id, piece, std::move(sv.piece), sv.value, sv.error_bound};
}

}  // namespace geocake
