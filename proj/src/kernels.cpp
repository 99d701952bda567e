#include "tarski/kernels.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tarski/errors.hpp"
#include "tarski/rng.hpp"

namespace tarski::kernels {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

std::vector<std::uint64_t> strides(const Box& box) {
  std::vector<std::uint64_t> s(box.dim(), 1);
  for (std::size_t i = box.dim(); i-- > 1;) {
    s[i - 1] = s[i] * static_cast<std::uint64_t>(box.side(i));
  }
  return s;
}

// Pair condition (x,0)+g(x) <= (y,0)+g(y); returns the first failing output.
std::optional<std::size_t> pair_violation(const Point& x, const SignVector& gx, const Point& y,
                                          const SignVector& gy) {
  const std::size_t k = x.dim();
  for (std::size_t t = 0; t < gx.size(); ++t) {
    const Coord lhs = (t < k ? x[t] : 0) + gx[t];
    const Coord rhs = (t < k ? y[t] : 0) + gy[t];
    if (lhs > rhs) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> range_violation(const Box& box, const Point& x, const SignVector& gx) {
  for (std::size_t t = 0; t < box.dim(); ++t) {
    const Coord moved = x[t] + gx[t];
    if (moved < box.lo()[t] || moved > box.hi()[t]) return t;
  }
  return std::nullopt;
}

std::optional<ValidationReport> sign_violation_at(const Box& box,
                                                  const std::vector<SignVector>& table,
                                                  const std::vector<std::uint64_t>& stride,
                                                  std::uint64_t i) {
  const Point x = box.point_at(i);
  const SignVector& gx = table[i];
  if (gx.size() < box.dim()) {
    ValidationReport r;
    r.kind = ValidationReport::Kind::Range;
    r.x = x;
    r.message = "sign vector at " + x.str() + " is shorter than the box dimension";
    return r;
  }
  if (auto t = range_violation(box, x, gx)) {
    ValidationReport r;
    r.kind = ValidationReport::Kind::Range;
    r.x = x;
    r.output = *t;
    r.message = "range violated at " + x.str() + " output " + std::to_string(*t + 1) + ": g=" +
                gx.str();
    return r;
  }
  for (std::size_t d = 0; d < box.dim(); ++d) {
    if (x[d] == box.hi()[d]) continue;
    Point y = x;
    ++y[d];
    const SignVector& gy = table[i + stride[d]];
    if (auto t = pair_violation(x, gx, y, gy)) {
      ValidationReport r;
      r.kind = ValidationReport::Kind::Monotone;
      r.x = x;
      r.y = y;
      r.output = *t;
      r.message = "monotonicity violated at (" + x.str() + "," + y.str() + ") output " +
                  std::to_string(*t + 1);
      return r;
    }
  }
  return std::nullopt;
}

std::optional<ValidationReport> fn_violation_at(const Box& box, const std::vector<Point>& table,
                                                const std::vector<std::uint64_t>& stride,
                                                std::uint64_t i) {
  const Point x = box.point_at(i);
  const Point& fx = table[i];
  if (!box.contains(fx)) {
    ValidationReport r;
    r.kind = ValidationReport::Kind::SelfMap;
    r.x = x;
    r.message = "f" + x.str() + "=" + fx.str() + " leaves the box " + box.str();
    return r;
  }
  for (std::size_t d = 0; d < box.dim(); ++d) {
    if (x[d] == box.hi()[d]) continue;
    Point y = x;
    ++y[d];
    const Point& fy = table[i + stride[d]];
    for (std::size_t t = 0; t < box.dim(); ++t) {
      if (fx[t] > fy[t]) {
        ValidationReport r;
        r.kind = ValidationReport::Kind::Monotone;
        r.x = x;
        r.y = y;
        r.output = t;
        r.message = "monotonicity violated at (" + x.str() + "," + y.str() + "): f=" + fx.str() +
                    " vs " + fy.str();
        return r;
      }
    }
  }
  return std::nullopt;
}

template <class ViolationAt>
ValidationReport first_violation(std::uint64_t n, bool parallel, ViolationAt&& at) {
  std::uint64_t first = kNone;
  if (parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(min : first) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      if (u < first && at(u)) first = u;
    }
  } else {
    for (std::uint64_t i = 0; i < n; ++i) {
      if (at(i)) {
        first = i;
        break;
      }
    }
  }
  if (first == kNone) {
    ValidationReport ok;
    ok.points_checked = n;
    ok.message = "ok";
    return ok;
  }
  ValidationReport r = *at(first);
  r.points_checked = n;
  return r;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<SignVector> tabulate(const SignOracle& o, bool parallel) {
  const Box& box = o.box();
  const auto n = static_cast<std::int64_t>(box.volume());
  std::vector<SignVector> out(static_cast<std::size_t>(n));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = o.evaluate(box.point_at(static_cast<std::uint64_t>(i)));
    }
  } else {
    std::size_t i = 0;
    for_each_point(box, [&](const Point& x) { out[i++] = o.evaluate(x); });
  }
  return out;
}

std::vector<Point> tabulate(const FnOracle& f, bool parallel) {
  const Box& box = f.box();
  const auto n = static_cast<std::int64_t>(box.volume());
  std::vector<Point> out(static_cast<std::size_t>(n));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = f.evaluate(box.point_at(static_cast<std::uint64_t>(i)));
    }
  } else {
    std::size_t i = 0;
    for_each_point(box, [&](const Point& x) { out[i++] = f.evaluate(x); });
  }
  return out;
}

ValidationReport check_sign_table(const Box& box, const std::vector<SignVector>& table,
                                  bool parallel) {
  if (table.size() != box.volume()) throw UsageError("table size does not match box volume");
  const auto stride = strides(box);
  return first_violation(table.size(), parallel,
                         [&](std::uint64_t i) { return sign_violation_at(box, table, stride, i); });
}

ValidationReport check_fn_table(const Box& box, const std::vector<Point>& table, bool parallel) {
  if (table.size() != box.volume()) throw UsageError("table size does not match box volume");
  const auto stride = strides(box);
  return first_violation(table.size(), parallel,
                         [&](std::uint64_t i) { return fn_violation_at(box, table, stride, i); });
}

std::vector<std::uint64_t> fixed_point_indices(const Box& box, const std::vector<Point>& table,
                                               bool parallel) {
  const auto n = static_cast<std::int64_t>(table.size());
  std::vector<char> hit(table.size(), 0);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      hit[u] = table[u] == box.point_at(u) ? 1 : 0;
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      hit[u] = table[u] == box.point_at(u) ? 1 : 0;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::uint64_t> star_solution_indices(const std::vector<SignVector>& table,
                                                 bool parallel) {
  const auto n = static_cast<std::int64_t>(table.size());
  std::vector<char> hit(table.size(), 0);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) hit[static_cast<std::size_t>(i)] = table[i].uniform();
  } else {
    for (std::int64_t i = 0; i < n; ++i) hit[static_cast<std::size_t>(i)] = table[i].uniform();
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

}  // namespace tarski::kernels

namespace tarski {

namespace {

Point random_point(Xorshift64Star& rng, const Point& lo, const Point& hi) {
  Point x(lo.dim());
  for (std::size_t i = 0; i < lo.dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

}  // namespace

ValidationReport validate(const SignOracle& o, const ValidateOptions& opts) {
  const Box& box = o.box();
  if (opts.mode == ValidateOptions::Mode::Exhaustive) {
    if (box.volume() > opts.volume_cap) {
      throw UsageError("exhaustive validation over " + std::to_string(box.volume()) +
                       " points exceeds the cap");
    }
    auto table = kernels::tabulate(o, opts.parallel);
    return kernels::check_sign_table(box, table, opts.parallel);
  }
  Xorshift64Star rng(opts.seed);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    Point x = random_point(rng, box.lo(), box.hi());
    Point y = random_point(rng, x, box.hi());
    SignVector gx = o.evaluate(x);
    SignVector gy = o.evaluate(y);
    for (const auto& [p, gp] : {std::pair{x, gx}, std::pair{y, gy}}) {
      for (std::size_t t = 0; t < box.dim(); ++t) {
        const Coord moved = p[t] + gp[t];
        if (moved < box.lo()[t] || moved > box.hi()[t]) {
          ValidationReport r;
          r.kind = ValidationReport::Kind::Range;
          r.x = p;
          r.output = t;
          r.points_checked = 2 * (s + 1);
          r.message = "range violated at " + p.str() + " output " + std::to_string(t + 1);
          return r;
        }
      }
    }
    for (std::size_t t = 0; t < gx.size(); ++t) {
      const Coord lhs = (t < box.dim() ? x[t] : 0) + gx[t];
      const Coord rhs = (t < box.dim() ? y[t] : 0) + gy[t];
      if (lhs > rhs) {
        ValidationReport r;
        r.kind = ValidationReport::Kind::Monotone;
        r.x = x;
        r.y = y;
        r.output = t;
        r.points_checked = 2 * (s + 1);
        r.message = "monotonicity violated at (" + x.str() + "," + y.str() + ") output " +
                    std::to_string(t + 1);
        return r;
      }
    }
  }
  ValidationReport ok;
  ok.points_checked = 2 * opts.samples;
  ok.message = "ok";
  return ok;
}

ValidationReport validate(const FnOracle& f, const ValidateOptions& opts) {
  const Box& box = f.box();
  if (opts.mode == ValidateOptions::Mode::Exhaustive) {
    if (box.volume() > opts.volume_cap) {
      throw UsageError("exhaustive validation over " + std::to_string(box.volume()) +
                       " points exceeds the cap");
    }
    auto table = kernels::tabulate(f, opts.parallel);
    return kernels::check_fn_table(box, table, opts.parallel);
  }
  Xorshift64Star rng(opts.seed);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    Point x = random_point(rng, box.lo(), box.hi());
    Point y = random_point(rng, x, box.hi());
    Point fx = f.evaluate(x);
    Point fy = f.evaluate(y);
    ValidationReport r;
    r.points_checked = 2 * (s + 1);
    if (!box.contains(fx) || !box.contains(fy)) {
      r.kind = ValidationReport::Kind::SelfMap;
      r.x = box.contains(fx) ? y : x;
      r.message = "f" + r.x.str() + " leaves the box " + box.str();
      return r;
    }
    if (!leq(fx, fy)) {
      r.kind = ValidationReport::Kind::Monotone;
      r.x = x;
      r.y = y;
      r.message = "monotonicity violated at (" + x.str() + "," + y.str() + ")";
      return r;
    }
  }
  ValidationReport ok;
  ok.points_checked = 2 * opts.samples;
  ok.message = "ok";
  return ok;
}

}  // namespace tarski
