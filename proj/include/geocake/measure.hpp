#pragma once

#include <string>
#include <vector>

#include "geocake/family.hpp"
#include "geocake/geometry.hpp"
#include "geocake/rational.hpp"

namespace geocake {

// Piecewise-constant density on square cells; zero outside the grid.
class GridDensity {
 public:
  GridDensity() = default;
  // weights are row-major, index j * nx + i, row 0 at the bottom.
  GridDensity(Point origin, double cell, int nx, int ny, std::vector<double> weights);

  Point origin() const { return origin_; }
  double cell() const { return cell_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_[static_cast<std::size_t>(j) * nx_ + i]; }
  double total() const { return total_; }
  double max_weight() const { return max_weight_; }
  Box extent() const { return {origin_.x, origin_.y, origin_.x + nx_ * cell_, origin_.y + ny_ * cell_}; }

  // Exact integral over an axis-aligned box.
  double integrate_box(const Box& b) const;
  GridDensity scaled(double factor) const;

  friend bool operator==(const GridDensity& a, const GridDensity& b) {
    return a.origin_ == b.origin_ && a.cell_ == b.cell_ && a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.weights_ == b.weights_;
  }

 private:
  // Mass of [origin, (x, y)]; closed form inside one cell.
  double cumulative(double x, double y) const;

  Point origin_;
  double cell_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> weights_;
  std::vector<double> corner_mass_;  // (nx+1) x (ny+1) prefix sums
  double total_ = 0;
  double max_weight_ = 0;
};

struct AgentValuation {
  std::string id;
  GridDensity density;
  friend bool operator==(const AgentValuation&, const AgentValuation&) = default;
};

double integrate(const GridDensity& density, const Region& region);

GridDensity normalize(const GridDensity& density);
// Scales so that the cake integrates to 1.
GridDensity normalize_on(const GridDensity& density, const Region& cake);

struct Fixture {
  std::string name;
  Region cake;
  std::vector<AgentValuation> valuations;
  PieceFamily family;
  Rational bound;
  // fig8d is checked for several finite ratios.
  std::vector<double> ratios;
};

Fixture make_fixture(const std::string& name);
Fixture make_slim_desert(int n, double ratio, double eps, double delta);
std::vector<std::string> fixture_names();

}  // namespace geocake
