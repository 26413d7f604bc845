#pragma once

#include <string>
#include <variant>
#include <vector>

#include "geocake/family.hpp"
#include "geocake/geometry.hpp"
#include "geocake/measure.hpp"
#include "geocake/rational.hpp"
#include "geocake/svalue.hpp"

namespace geocake {

// region ∩ {coordinate < lo + t (hi - lo)}; reverse sweeps from the high end.
struct SweepLine {
  Region region;
  int axis = 0;  // 0 = x, 1 = y
  bool reverse = false;
};

// limit scaled by t about one of its corners.
struct CornerSquare {
  Box limit;
  Point corner;
};

// Two corner boxes of the given box, each scaled by t, anchored at the
// lower-left and upper-right corners.
struct TwinSquares {
  Box box;
};

// Twin growth inside every listed square, clipped to the parent region; the
// squares must cover the parent.
struct QuadSquares {
  std::vector<Box> squares;
  Region parent;
};

// start ∪ (target ∩ ball(center, t · rmax)). Raster targets use the Euclidean
// disc on cell centres; box-like targets use the max-norm ball.
struct GrowingDiscBridge {
  Region start;
  Region target;
  Point center;
};

// t ≤ 1/2: inner scaled by 2t about its centre; t ≥ 1/2: inner grown towards
// the target by a ball.
struct DilatingBoxBridge {
  Box inner;
  Region target;
};

// Three equal phases inside parent: grow sub from its centre, bridge to
// parent ∖ rest, then shrink rest about center.
struct ThreePhaseFat {
  Region parent;
  Box sub;
  std::vector<Box> rest;
  Point center;
};

// Two strips approaching from the left and right sides; not square-continuous.
struct OpposingStrips {
  Box box;
};

using KnifeShape = std::variant<SweepLine, CornerSquare, TwinSquares, QuadSquares, GrowingDiscBridge,
                                DilatingBoxBridge, ThreePhaseFat, OpposingStrips>;

struct KnifeSpec {
  Region cake;  // complements are taken in the whole cake
  KnifeShape shape;

  std::string name() const;
};

// Declared endpoints K(0) and K(1).
Region knife_start(const KnifeSpec& spec);
Region knife_end(const KnifeSpec& spec);

struct KnifeEval {
  double t = 0;
  Region piece;
  Region complement;
};

KnifeEval eval_knife(const KnifeSpec& spec, double t);

// Sub-squares of the largest inscribed square of a fat cake, ordered so that
// every suffix is star-shaped about the square's centre.
struct SubcubeGrid {
  Box outer;
  std::vector<Box> cubes;
  Point center;
};
SubcubeGrid subcube_grid(const Region& cake, int m);
KnifeSpec three_phase_fat(const Region& cake, int grid_m, int subcube_index);

struct HalvingOptions {
  double tol = 1e-9;          // stop once |f| ≤ tol
  double time_tol = 1e-12;    // or once the bracket is this narrow
  double resolution = 1.0 / 256;
};

struct HalvingResult {
  double t = 0;
  double f = 0;            // V^S(K(t)) - V^S(complement), lower sides
  double lo = 0;
  double hi = 1;           // f(lo) ≤ 0 ≤ f(hi)
  double search_error = 0; // s_value error bounds plus any jump left in the bracket
  int iterations = 0;
};

// Bisection for the time where an agent is indifferent between the piece and
// its complement. Throws naming the failing endpoint when f(0) > 0 or f(1) < 0.
HalvingResult find_halving_time(const KnifeSpec& spec, const AgentValuation& agent, const PieceFamily& family,
                                const HalvingOptions& opts = {});

// Upper bound on sup_t of the summed cover numbers of K(t) and its
// complement, or unbounded when covers are unavailable or blow up near an end.
Rational knife_loss_bound(const KnifeSpec& spec, const PieceFamily& family);

struct SGoodReport {
  bool pass = true;
  double area_modulus = 0;   // worst |area(K(t+δ)) - area(K(t))|
  double value_modulus = 0;  // worst V^S change of piece or complement
  double worst_t = 0;
  int densities = 0;
};

SGoodReport check_s_good(const KnifeSpec& spec, const PieceFamily& family, int samples, double delta,
                         double epsilon, Exec exec = Exec::parallel);

}  // namespace geocake
