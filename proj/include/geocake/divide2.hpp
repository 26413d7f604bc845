#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geocake/allocation.hpp"
#include "geocake/knives.hpp"

namespace geocake {

// Replaces the second agent's reports, for testing that the first agent's
// guarantee does not depend on the other agent acting honestly.
struct Adversary {
  std::function<double(double honest)> time;
  std::function<int(int honest, int options)> choice;
};

struct Divide2Options {
  double tol = 1e-9;
  double resolution = 0;  // 0 picks default_resolution(cake)
  Adversary adversary;
};

using Valuations = std::vector<AgentValuation>;

// Both agents report halving times; the earlier one takes K(t*) at the
// midpoint t*, the other takes the complement. Without an explicit guarantee
// the knife's loss bound is computed.
Allocation generic_knife_2(const KnifeSpec& spec, const Valuations& agents, const PieceFamily& family,
                           const Divide2Options& opts = {}, std::optional<Rational> guarantee = std::nullopt);

// Errors carry the letter of the failing condition: (a) partition loss,
// (b) missing or mismatched knives, (c) part knife loss.
Allocation single_partition_2(const Region& cake, const std::vector<Region>& parts,
                              const std::vector<KnifeSpec>& part_knives,
                              const std::vector<KnifeSpec>& complement_knives, const Valuations& agents,
                              const PieceFamily& family, const Divide2Options& opts = {});

// Disjoint islands, each with a sweep (rectangles) or twin-square (squares) knife.
Allocation archipelago_2(const Region& cake, const Valuations& agents, const PieceFamily& family,
                         const Divide2Options& opts = {});

// R-fat box cake, R ≥ 2, halves then corner quarters; guarantee 1/3.
Allocation multiple_partition_2(const Region& cake, const Valuations& agents, double ratio,
                                const Divide2Options& opts = {});

// Any fat cake, split through the largest inscribed square; pieces are
// 2R-fat; guarantee 1/2. Non-raster cakes are rasterised on a 64-cell grid.
Allocation divide_fat_2(const Region& cake, const Valuations& agents, const Divide2Options& opts = {});

// Convex cake, a line rotating about the inscribed square's centre; the first
// agent cuts, the second chooses.
Allocation rotating_knife_2(const Region& cake, const Valuations& agents, const Divide2Options& opts = {});

using Allocator = std::function<Allocation(const Region&, const Valuations&)>;

// Turns a proportional allocation into an envy-free one: keep, swap, or
// re-divide the envied usable piece with the family's two-agent procedure.
Allocation envy_from_prop_2(const Allocator& allocator, const Region& cake, const Valuations& agents,
                            const PieceFamily& family, const Divide2Options& opts = {});

}  // namespace geocake
