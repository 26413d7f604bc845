#pragma once

#include <limits>
#include <string>

namespace geocake {

// The family S of usable pieces.
struct PieceFamily {
  enum class Kind { squares, fat_rects, fat_objects, square_pairs, all_pieces };

  Kind kind = Kind::squares;
  double ratio = 1.0;  // R for fat_rects / fat_objects; infinity means plain rectangles

  static PieceFamily squares() { return {Kind::squares, 1.0}; }
  static PieceFamily fat_rects(double r);
  static PieceFamily rectangles() { return {Kind::fat_rects, std::numeric_limits<double>::infinity()}; }
  static PieceFamily fat_objects(double r);
  static PieceFamily square_pairs() { return {Kind::square_pairs, 1.0}; }
  static PieceFamily all_pieces() { return {Kind::all_pieces, std::numeric_limits<double>::infinity()}; }

  bool is_rect_like() const { return kind == Kind::squares || kind == Kind::fat_rects; }
  std::string name() const;

  friend bool operator==(const PieceFamily&, const PieceFamily&) = default;
};

}  // namespace geocake
