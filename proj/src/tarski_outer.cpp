#include "tarski/tarski_outer.hpp"

#include "tarski/errors.hpp"
#include "tarski/kernels.hpp"

namespace tarski {

namespace {

void check_loop_invariant(const FnOracle& f, const Point& l, const Point& r,
                          const SolverConfig& cfg) {
  DebugQueryScope scope(f.stats_handle());
  std::string detail;
  if (!leq(l, r)) {
    detail = "l=" + l.str() + " not <= r=" + r.str();
  } else if (!leq(l, f.query(l))) {
    detail = "l=" + l.str() + " is not postfixed";
  } else if (!leq(f.query(r), r)) {
    detail = "r=" + r.str() + " is not prefixed";
  }
  if (detail.empty()) return;
  if (cfg.trace != nullptr) cfg.trace->violations.push_back({'d', detail});
  if (cfg.throw_on_violation) throw InstanceInvalid("invariant (d) violated: " + detail);
}

TarskiResult finish(const FnOracle& f, Point x, std::uint64_t rounds) {
  TarskiResult res;
  res.verified = f.evaluate(x) == x;
  res.point = std::move(x);
  res.rounds = rounds;
  res.stats = f.stats();
  return res;
}

// Fixed point of x -> f(x, suffix) on the first m coordinates inside [l, r],
// where l is postfixed and r prefixed on those coordinates.
Point dqy(const FnOracle& f, const Point& l0, const Point& r0, const Point& suffix,
          std::uint64_t& rounds) {
  const std::size_t m = l0.dim();
  if (m == 0) return Point{};
  Point l = l0;
  Point r = r0;
  while (l[m - 1] <= r[m - 1]) {
    ++rounds;
    const Coord v = l[m - 1] + (r[m - 1] - l[m - 1]) / 2;
    const Point tail = Point{v}.concat(suffix);
    const Point inner = dqy(f, l.slice(0, m - 1), r.slice(0, m - 1), tail, rounds);
    const Point z = inner.concat(tail);
    const Point fz = f.query(z);
    const int s = sgn(fz[m - 1] - v);
    if (s == 0) return inner.concat(Point{v});
    if (s > 0) {
      l = inner.concat(Point{v + 1});
    } else {
      r = inner.concat(Point{v - 1});
    }
  }
  throw InstanceInvalid("baseline bracket emptied at coordinate " + std::to_string(m) +
                        ": f is not monotone");
}

}  // namespace

TarskiResult solve_tarski(const FnOracle& f, const SolverConfig& cfg) {
  const Box& box = f.box();
  const std::size_t d = box.dim();
  Point l = box.lo();
  Point r = box.hi();
  std::uint64_t rounds = 0;

  while (true) {
    if (cfg.debug_checks) check_loop_invariant(f, l, r, cfg);
    std::size_t i = 0;
    for (std::size_t t = 1; t < d; ++t) {
      if (r[t] - l[t] > r[i] - l[i]) i = t;
    }
    if (r[i] - l[i] <= 2) break;
    ++rounds;
    const Coord v = l[i] + (r[i] - l[i] + 1) / 2;

    Point q;
    bool prefixed = false;
    if (d == 1) {
      q = Point{v};
      prefixed = f.query(q)[0] <= v;
    } else {
      const SignOracle g =
          box_restriction(slice_oracle(f, i, v), Box(l.erased(i), r.erased(i)), cfg.debug_checks);
      const StarSolution sol = solve_star(g, cfg);
      q = sol.point.inserted(i, v);
      prefixed = sol.polarity == Polarity::Nonpos;
    }
    if (prefixed) {
      r = q;
    } else {
      l = q;
    }
  }

  auto x = brute_force_fixed_point(f, Box(l, r));
  if (!x) throw InstanceInvalid("no fixed point in final box " + Box(l, r).str());
  return finish(f, *x, rounds);
}

std::optional<Point> brute_force_fixed_point(const FnOracle& f, const Box& box, std::uint64_t cap) {
  if (box.volume() > cap) throw UsageError("brute force over " + box.str() + " exceeds the cap");
  std::optional<Point> hit;
  for (const Point& x : enumerate_box(box)) {
    if (f.query(x) == x) return x;
  }
  return hit;
}

std::vector<Point> all_fixed_points(const FnOracle& f, const Box& box, bool parallel,
                                    std::uint64_t cap) {
  if (box.volume() > cap) throw UsageError("fixed-point scan over " + box.str() + " exceeds the cap");
  const FnOracle sub(box, [f](const Point& x) { return f.evaluate(x); });
  const auto table = kernels::tabulate(sub, parallel);
  std::vector<Point> out;
  for (std::uint64_t i : kernels::fixed_point_indices(box, table, parallel)) {
    out.push_back(box.point_at(i));
  }
  if (out.empty()) throw InstanceInvalid("no fixed point in " + box.str() + ": f is not monotone");
  return out;
}

TarskiResult solve_tarski_dqy(const FnOracle& f) {
  std::uint64_t rounds = 0;
  Point x = dqy(f, f.box().lo(), f.box().hi(), Point{}, rounds);
  return finish(f, std::move(x), rounds);
}

TarskiResult solve_tarski_brute(const FnOracle& f) {
  auto x = brute_force_fixed_point(f, f.box());
  if (!x) throw InstanceInvalid("no fixed point in " + f.box().str() + ": f is not monotone");
  return finish(f, *x, 0);
}

}  // namespace tarski
