#pragma once

#include "geocake/exec.hpp"
#include "geocake/family.hpp"
#include "geocake/geometry.hpp"
#include "geocake/measure.hpp"

namespace geocake {

struct SValueResult {
  Region piece;
  double value = 0;
  double error_bound = 0;  // true supremum lies in [value, value + error_bound]
};

// Best usable piece inside region. Box-like regions are solved exactly for
// squares and fat rectangles; raster regions carry a one-cell shift bound.
SValueResult s_value(const GridDensity& density, const Region& region, const PieceFamily& family,
                     double resolution, Exec exec = Exec::parallel);

// Exhaustive lattice enumeration, independent of s_value. Test use only.
SValueResult oracle_s_value(const GridDensity& density, const Region& region, const PieceFamily& family);

// Best R-fat rectangle (R = 1 for squares) inside a union of boxes, exact.
struct RectPick {
  Box box;
  double value = 0;
};
RectPick best_fat_rect(const GridDensity& density, std::span<const Box> boxes, double ratio,
                       Exec exec = Exec::parallel);

// Two squares, possibly overlapping, whose union is the region; empty if none.
std::vector<Box> as_square_pair(const Region& region);

}  // namespace geocake
