#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geocake/allocation.hpp"
#include "geocake/exec.hpp"
#include "geocake/knives.hpp"

namespace geocake {

// A map from the unit simplex to partitions of the cake into n pieces,
// built by recursive knife splits.
struct KnifeTuple {
  enum class Kind { squares, fat };
  Kind kind = Kind::squares;
  Region cake;
  int n = 0;
  PieceFamily family;
  Rational loss_bound;
  // Square tuples: a balanced binary tree over a power-of-two number of
  // leaves; leaf_piece maps each leaf to a piece index or -1 for a leaf
  // whose time stays zero.
  Box box;
  std::vector<int> leaf_piece;
  // Fat tuples: a chain of three-phase splits over the sub-cube grid.
  int grid_m = 0;
  SubcubeGrid grid;
};

// Square cake (or a rectangle, treated as a scaled square). Pieces are
// unions of twin squares; family Squares or FatRects(aspect) for rectangles.
KnifeTuple build_square_tuple(const Region& cake, int n);
// Fat cake with m = ceil(sqrt(n)) sub-cubes per side of the inscribed square;
// pieces are mR-fat. Supports n <= 9.
KnifeTuple build_fat_tuple(const Region& cake, int n);

// Throws unless t lies on the simplex within 1e-9.
std::vector<Region> eval_tuple(const KnifeTuple& tuple, std::span<const double> t);

// Largest sum of cover numbers seen over the given simplex points; unbounded
// when a piece has no cover.
Rational sampled_tuple_loss(const KnifeTuple& tuple, const std::vector<std::vector<double>>& points);

// Lattice points x >= 0 with sum k and the standard triangulation into
// k^(n-1) elementary simplices; owner(x) = (sum_i i x_i) mod n.
struct SimplexGrid {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> vertices;
  std::vector<std::vector<int>> cells;  // n vertex indices each
  std::vector<int> owner;
  std::vector<int> label;  // -1 until labelled
};

SimplexGrid build_simplex_grid(int n, int k);
int vertex_owner(std::span<const int> x, int n);

// Each vertex's owner names its favourite non-empty piece; ties go to the
// lowest index. Throws if a label falls outside the vertex's support.
void label_grid(SimplexGrid& grid, const KnifeTuple& tuple, const std::vector<AgentValuation>& agents,
                double resolution, Exec exec = Exec::parallel);
std::vector<int> fully_labeled_cells(const SimplexGrid& grid);

// Labels the grid and returns the first fully labelled cell.
std::optional<int> sperner_search(const KnifeTuple& tuple, SimplexGrid& grid,
                                  const std::vector<AgentValuation>& agents, double resolution);

struct DivideNOptions {
  double epsilon = 1e-3;
  int k0 = 8;
  int k_max = 4096;
  double resolution = 0;  // 0 picks default_resolution(cake)
  std::size_t exhaustive_vertices = 20000;
};

// Builds the tuple for the cake and family, then refines the mesh until the
// barycentre of a fully labelled cell is epsilon-envy-free.
Allocation divide_n(const Region& cake, const std::vector<AgentValuation>& agents, const PieceFamily& family,
                    const DivideNOptions& opts = {});
Allocation divide_n(const KnifeTuple& tuple, const std::vector<AgentValuation>& agents,
                    const DivideNOptions& opts = {});

}  // namespace geocake
