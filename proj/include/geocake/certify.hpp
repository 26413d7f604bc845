#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geocake/allocation.hpp"
#include "geocake/cover.hpp"

namespace geocake {

struct Certificate {
  double envy_free_at = 0;          // largest V^S_i(X_j) - V^S_i(X_i), floored at 0
  double min_proportionality = 0;   // smallest usable value over the agent's cake value
  std::vector<FatnessReport> fatness;        // per usable piece
  std::vector<bool> family_membership;       // per usable piece
  std::vector<std::pair<int, int>> envy_pairs;  // (envious, envied) beyond epsilon
  bool pass = true;
  std::string failing_clause;
};

// True when the region is a member of the family, allowing raster error.
bool in_family(const Region& region, const PieceFamily& family);

// Recomputes every agent's value of every piece at the given resolution and
// checks envy, disjointness, containment in the cake and family membership.
Certificate check_envy_free(const Allocation& alloc, const Region& cake, const std::vector<AgentValuation>& agents,
                            const PieceFamily& family, double resolution, double epsilon);

bool check_proportionality(const Allocation& alloc, const Region& cake, const std::vector<AgentValuation>& agents,
                           Rational threshold, double epsilon);

struct UpperBoundReport {
  std::string fixture;
  double ratio = 0;        // family ratio checked (fat rectangle fixtures)
  double bound = 0;        // claimed bound
  double max_min = 0;      // certified upper bound on the best two-agent max-min share
  double lattice_error = 0;
  bool pass = false;
  // Slim-desert mode.
  double min_bridge_side = 0;  // smallest inscribed square a bridging piece can have
  int max_bridges = 0;         // bridging pieces that fit side by side
  std::string detail;
};

// Two-agent fixtures: any two disjoint axis-parallel pieces are split by an
// axis-parallel line, so scanning lines bounds the max-min share from above.
// The slim desert is checked by water accounting over bridging pieces.
std::vector<UpperBoundReport> verify_upper_bound(const Fixture& fixture, double resolution);

}  // namespace geocake
