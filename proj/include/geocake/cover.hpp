#pragma once

#include <optional>
#include <vector>

#include "geocake/family.hpp"
#include "geocake/geometry.hpp"

namespace geocake {

struct CoverResult {
  int count = 0;
  std::vector<Box> pieces;  // empty when the family admits the region whole
  bool minimal = false;     // search finished within its budget
};

// Fewest family pieces whose union is exactly the region, searched over
// maximal admissible windows. nullopt when the shape is outside the supported
// catalog (polygons, non-fat rasters, large rasters).
std::optional<CoverResult> cover(const Region& region, const PieceFamily& family);
std::optional<int> cover_number(const Region& region, const PieceFamily& family);

}  // namespace geocake
