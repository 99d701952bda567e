#ifndef TARSKI_LATTICE_HPP
#define TARSKI_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "tarski/errors.hpp"

namespace tarski {

using Coord = std::int64_t;

/// Largest supported side length. Keeps x +/- 1 and box index arithmetic
/// inside 64-bit range.
inline constexpr Coord kMaxSide = Coord{1} << 40;

/// A point of the integer grid. Coordinates are 1-based values.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim, Coord fill = 0) : coords_(dim, fill) {}
  Point(std::initializer_list<Coord> init) : coords_(init) {}
  explicit Point(std::vector<Coord> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Coord> coords() const { return coords_; }
  const std::vector<Coord>& vec() const { return coords_; }

  /// Copy with `value` inserted at position `pos`.
  Point inserted(std::size_t pos, Coord value) const;
  /// Copy with coordinate `pos` removed.
  Point erased(std::size_t pos) const;
  /// Coordinates [first, first + count).
  Point slice(std::size_t first, std::size_t count) const;
  /// Concatenation (this, tail).
  Point concat(const Point& tail) const;

  std::string str() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<Coord> coords_;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// Componentwise order. Throws UsageError on dimension mismatch.
bool leq(const Point& a, const Point& b);
Point lub(std::span<const Point> points);
Point glb(std::span<const Point> points);

/// Product of integer intervals [lo_i, hi_i].
class Box {
 public:
  Box() = default;
  Box(Point lo, Point hi);

  /// [1, n]^k
  static Box cube(std::size_t k, Coord n);
  /// [1, sides_i]
  static Box from_sides(std::span<const Coord> sides);

  std::size_t dim() const { return lo_.dim(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  Coord side(std::size_t i) const { return hi_[i] - lo_[i] + 1; }
  std::vector<Coord> sides() const;
  /// Number of points; throws UsageError if it does not fit in 63 bits.
  std::uint64_t volume() const;

  bool contains(const Point& x) const;
  /// True if `other` lies inside this box.
  bool contains(const Box& other) const;

  /// Row-major index, last coordinate fastest.
  std::uint64_t index_of(const Point& x) const;
  Point point_at(std::uint64_t index) const;

  Box erased(std::size_t dim) const;
  Box slice(std::size_t first, std::size_t count) const;

  std::string str() const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Point lo_;
  Point hi_;
};

/// Every point of `box` in row-major order (last coordinate fastest).
std::vector<Point> enumerate_box(const Box& box);

/// Calls `visit` on every point in row-major order without materialising.
void for_each_point(const Box& box, const std::function<void(const Point&)>& visit);

/// Exact three-valued sign.
inline int sgn(Coord v) { return (v > 0) - (v < 0); }

}  // namespace tarski

#endif  // TARSKI_LATTICE_HPP
