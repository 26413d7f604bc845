#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace geocake {

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Box {
  double xmin = 0;
  double ymin = 0;
  double xmax = 0;
  double ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return empty() ? 0.0 : width() * height(); }
  bool empty() const { return !(xmax > xmin && ymax > ymin); }
  Point center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
  double long_side() const;
  double short_side() const;
  bool is_square(double tol = 1e-9) const;
  bool contains(const Box& other, double tol = 1e-12) const;
  bool contains(Point p, double tol = 0) const;

  friend bool operator==(const Box&, const Box&) = default;
};

Box intersect(const Box& a, const Box& b);
bool interiors_overlap(const Box& a, const Box& b);
Box bounding_box(std::span<const Box> boxes);

// Union of boxes with pairwise-disjoint interiors.
struct Rectilinear {
  std::vector<Box> boxes;
  friend bool operator==(const Rectilinear&, const Rectilinear&) = default;
};

// Cell set on a regular square grid; row 0 is the bottom row.
struct Raster {
  Point origin;
  double cell = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> cells;

  static Raster blank(Point origin, double cell, int nx, int ny);

  bool at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i] != 0; }
  void set(int i, int j, bool v) { cells[static_cast<std::size_t>(j) * nx + i] = v ? 1 : 0; }
  Box cell_box(int i, int j) const;
  Point cell_center(int i, int j) const;
  std::size_t count() const;
  bool same_grid(const Raster& other) const;
  Box extent() const;
  // Maximal horizontal runs of filled cells, as boxes.
  std::vector<Box> row_runs() const;
  friend bool operator==(const Raster&, const Raster&) = default;
};

// Counter-clockwise vertex list of a convex, non-degenerate polygon.
struct ConvexPoly {
  std::vector<Point> vertices;
  friend bool operator==(const ConvexPoly&, const ConvexPoly&) = default;
};

inline constexpr std::size_t kMaxPolygonVertices = 4096;

class Region {
 public:
  using Shape = std::variant<Rectilinear, Box, Raster, ConvexPoly>;

  Region() = default;  // empty

  static Region box(const Box& b);
  static Region rectilinear(std::vector<Box> boxes);  // boxes may overlap; they are merged
  static Region raster(Raster r);
  static Region polygon(std::vector<Point> vertices);  // throws unless convex and non-degenerate
  // Like polygon(), but slivers below a relative area threshold become the empty region.
  static Region polygon_or_empty(std::vector<Point> vertices, double reference_area);

  const Shape& shape() const { return shape_; }
  bool is_empty() const;
  double area() const;
  Box bounds() const;
  bool is_box_like() const;
  bool is_raster() const { return std::holds_alternative<Raster>(shape_); }
  bool is_polygon() const { return std::holds_alternative<ConvexPoly>(shape_); }
  // Disjoint boxes covering the region exactly (box-like and raster shapes only).
  std::vector<Box> boxes() const;
  const Raster* as_raster() const { return std::get_if<Raster>(&shape_); }
  const ConvexPoly* as_polygon() const { return std::get_if<ConvexPoly>(&shape_); }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  explicit Region(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

Region intersect(const Region& a, const Region& b);
Region subtract(const Region& a, const Region& b);
Region unite(const Region& a, const Region& b);
double overlap_area(const Region& a, const Region& b);

// Cells of the grid whose centers lie in the region.
Raster rasterize(const Region& region, Point origin, double cell, int nx, int ny);
Raster rasterize_like(const Region& region, const Raster& grid);

// Boolean combination of two box sets via coordinate compression.
enum class BoolOp { unite, intersect, subtract };
std::vector<Box> combine_boxes(std::span<const Box> a, std::span<const Box> b, BoolOp op);

// Compressed occupancy grid of a union of boxes.
struct CompressedGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::uint8_t> fill;

  int nx() const { return static_cast<int>(xs.size()) - 1; }
  int ny() const { return static_cast<int>(ys.size()) - 1; }
  bool filled(int i, int j) const { return fill[static_cast<std::size_t>(j) * nx() + i] != 0; }
};
CompressedGrid compress(std::span<const Box> boxes, std::span<const double> extra_xs = {},
                        std::span<const double> extra_ys = {});

// Rectangles inside the union that cannot be extended in any direction.
std::vector<Box> maximal_rectangles(std::span<const Box> boxes);

// Per-cell side (in cells) of the largest square whose lower-left cell is (i, j).
std::vector<int> square_side_table(const Raster& r);

struct FatnessReport {
  double s_in = 0;
  double s_out = 0;
  double ratio = 1;
  double error_bound = 0;
  Box inner;  // a largest contained axis-aligned square
  Box outer;  // a smallest containing axis-aligned square
};

FatnessReport fatness(const Region& region);

Box dilate(const Box& box, double factor, Point anchor);

struct HalfplaneSplit {
  Region left;
  Region right;
};
HalfplaneSplit clip_halfplane(const ConvexPoly& poly, Point line_point, double line_angle);

double polygon_area(std::span<const Point> vertices);
bool is_convex_ccw(std::span<const Point> vertices);
// Keeps the part of poly where dot(normal, p) >= offset.
std::vector<Point> clip_convex(std::span<const Point> poly, Point normal, double offset);
std::vector<Point> intersect_convex(std::span<const Point> a, std::span<const Point> b);
std::vector<Point> box_polygon(const Box& b);
bool point_in_convex(std::span<const Point> poly, Point p);
ConvexPoly regular_polygon(Point center, double rx, double ry, int sides, double phase = 0);

}  // namespace geocake
