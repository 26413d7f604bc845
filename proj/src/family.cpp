#include "geocake/family.hpp"

#include <cmath>
#include <stdexcept>

namespace geocake {

PieceFamily PieceFamily::fat_rects(double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("fatness ratio must be >= 1");
  return {Kind::fat_rects, r};
}

PieceFamily PieceFamily::fat_objects(double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("fatness ratio must be >= 1");
  return {Kind::fat_objects, r};
}

std::string PieceFamily::name() const {
  switch (kind) {
    case Kind::squares: return "squares";
    case Kind::fat_rects: return std::isinf(ratio) ? "rectangles" : "fat_rects";
    case Kind::fat_objects: return "fat_objects";
    case Kind::square_pairs: return "square_pairs";
    case Kind::all_pieces: return "all_pieces";
  }
  return "unknown";
}

}  // namespace geocake
