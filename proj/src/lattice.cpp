#include "tarski/lattice.hpp"

#include <algorithm>
#include <limits>

namespace tarski {

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw UsageError("dimension mismatch: " + a.str() + " vs " + b.str());
  }
}

}  // namespace

Point Point::inserted(std::size_t pos, Coord value) const {
  if (pos > dim()) throw UsageError("insert position out of range");
  std::vector<Coord> out;
  out.reserve(dim() + 1);
  out.insert(out.end(), coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(pos));
  out.push_back(value);
  out.insert(out.end(), coords_.begin() + static_cast<std::ptrdiff_t>(pos), coords_.end());
  return Point(std::move(out));
}

Point Point::erased(std::size_t pos) const {
  if (pos >= dim()) throw UsageError("erase position out of range");
  std::vector<Coord> out(coords_);
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return Point(std::move(out));
}

Point Point::slice(std::size_t first, std::size_t count) const {
  if (first + count > dim()) throw UsageError("slice out of range");
  auto b = coords_.begin() + static_cast<std::ptrdiff_t>(first);
  return Point(std::vector<Coord>(b, b + static_cast<std::ptrdiff_t>(count)));
}

Point Point::concat(const Point& tail) const {
  std::vector<Coord> out(coords_);
  out.insert(out.end(), tail.coords_.begin(), tail.coords_.end());
  return Point(std::move(out));
}

std::string Point::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.dim();
  for (Coord c : p.coords()) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool leq(const Point& a, const Point& b) {
  require_same_dim(a, b);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

Point lub(std::span<const Point> points) {
  if (points.empty()) throw UsageError("lub of an empty set");
  Point out = points.front();
  for (const Point& p : points.subspan(1)) {
    require_same_dim(out, p);
    for (std::size_t i = 0; i < p.dim(); ++i) out[i] = std::max(out[i], p[i]);
  }
  return out;
}

Point glb(std::span<const Point> points) {
  if (points.empty()) throw UsageError("glb of an empty set");
  Point out = points.front();
  for (const Point& p : points.subspan(1)) {
    require_same_dim(out, p);
    for (std::size_t i = 0; i < p.dim(); ++i) out[i] = std::min(out[i], p[i]);
  }
  return out;
}

Box::Box(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_, hi_);
  for (std::size_t i = 0; i < lo_.dim(); ++i) {
    if (lo_[i] > hi_[i]) throw UsageError("empty box " + lo_.str() + ".." + hi_.str());
    if (hi_[i] - lo_[i] >= kMaxSide) throw UsageError("box side exceeds 2^40");
  }
}

Box Box::cube(std::size_t k, Coord n) {
  if (n < 1) throw UsageError("side must be >= 1");
  return Box(Point(k, 1), Point(k, n));
}

Box Box::from_sides(std::span<const Coord> sides) {
  std::vector<Coord> hi(sides.begin(), sides.end());
  for (Coord s : hi) {
    if (s < 1) throw UsageError("side must be >= 1");
  }
  return Box(Point(sides.size(), 1), Point(std::move(hi)));
}

std::vector<Coord> Box::sides() const {
  std::vector<Coord> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = side(i);
  return out;
}

std::uint64_t Box::volume() const {
  std::uint64_t v = 1;
  constexpr auto cap = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < dim(); ++i) {
    auto s = static_cast<std::uint64_t>(side(i));
    if (v > cap / s) throw UsageError("box volume overflows");
    v *= s;
  }
  return v;
}

bool Box::contains(const Point& x) const {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  return contains(other.lo()) && contains(other.hi());
}

std::uint64_t Box::index_of(const Point& x) const {
  if (!contains(x)) throw UsageError("point " + x.str() + " outside box " + str());
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    idx = idx * static_cast<std::uint64_t>(side(i)) + static_cast<std::uint64_t>(x[i] - lo_[i]);
  }
  return idx;
}

Point Box::point_at(std::uint64_t index) const {
  Point x(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    auto s = static_cast<std::uint64_t>(side(i));
    x[i] = lo_[i] + static_cast<Coord>(index % s);
    index /= s;
  }
  return x;
}

Box Box::erased(std::size_t d) const { return Box(lo_.erased(d), hi_.erased(d)); }

Box Box::slice(std::size_t first, std::size_t count) const {
  return Box(lo_.slice(first, count), hi_.slice(first, count));
}

std::string Box::str() const { return "[" + lo_.str() + ".." + hi_.str() + "]"; }

void for_each_point(const Box& box, const std::function<void(const Point&)>& visit) {
  Point x = box.lo();
  const std::size_t k = box.dim();
  while (true) {
    visit(x);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (x[i] < box.hi()[i]) {
        ++x[i];
        break;
      }
      x[i] = box.lo()[i];
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

std::vector<Point> enumerate_box(const Box& box) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(box.volume()));
  for_each_point(box, [&](const Point& x) { out.push_back(x); });
  return out;
}

}  // namespace tarski
