#include "tarski/star_solvers.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>

#include "tarski/errors.hpp"

namespace tarski {

namespace {

constexpr std::size_t kLedgerPairwiseLimit = 10'000;

// Thrown by the virtual oracle to stop B at the first uniform answer. Not a
// std::exception so solver code cannot swallow it by accident.
struct InlineReturn {
  const void* owner;
};

Coord floor_mid(Coord l, Coord r) { return l + (r - l) / 2; }

void require_shape(const SignOracle& o, std::size_t dim, const char* who) {
  if (o.dim() != dim || o.outputs() != dim + 1) {
    throw UsageError(std::string(who) + ": expected a " + std::to_string(dim) + "-dim oracle with " +
                     std::to_string(dim + 1) + " outputs");
  }
}

void report(const SolverConfig& cfg, char check, const std::string& detail) {
  if (cfg.trace != nullptr) cfg.trace->violations.push_back({check, detail});
  if (!cfg.throw_on_violation) return;
  const std::string msg = std::string("invariant (") + check + ") violated: " + detail;
  if (check == 'e') throw SolverContractError(msg);
  throw InstanceInvalid(msg);
}

}  // namespace

std::uint64_t SolverTrace::count(char check) const {
  return static_cast<std::uint64_t>(std::count_if(
      violations.begin(), violations.end(), [check](const Violation& v) { return v.check == check; }));
}

std::string base2d_name(Base2d b) { return b == Base2d::Fps ? "fps" : "staircase"; }

Base2d parse_base2d(const std::string& name) {
  if (name == "fps") return Base2d::Fps;
  if (name == "staircase") return Base2d::Staircase;
  throw UsageError("unknown 2-D base solver: " + name);
}

StarSolution make_solution(const Point& x, const SignVector& s) {
  if (s.uniform_nonpos()) return {x, s, Polarity::Nonpos};
  if (s.uniform_nonneg()) return {x, s, Polarity::Nonneg};
  throw InstanceInvalid("point " + x.str() + " with signs " + s.str() + " is not a solution");
}

StarSolution solve_star_1d(const SignOracle& o) {
  if (o.dim() != 1) throw UsageError("solve_star_1d: oracle must be 1-dimensional");
  Coord l = o.box().lo()[0];
  Coord r = o.box().hi()[0];
  while (r - l > 1) {
    const Coord m = floor_mid(l, r);
    const SignVector s = o.query(Point{m});
    if (s.uniform()) return make_solution(Point{m}, s);
    if (s[0] > 0) {
      l = m;
    } else if (s[0] < 0) {
      r = m;
    } else {
      throw InstanceInvalid("mixed signs " + s.str() + " with zero first sign at " + std::to_string(m));
    }
  }
  const SignVector sl = o.query(Point{l});
  if (sl.uniform()) return make_solution(Point{l}, sl);
  if (r != l) {
    const SignVector sr = o.query(Point{r});
    if (sr.uniform()) return make_solution(Point{r}, sr);
  }
  throw InstanceInvalid("no solution between " + std::to_string(l) + " and " + std::to_string(r) +
                        ": oracle breaks the range or monotone condition");
}

Coord bracketed_zero_in_row(const SignOracle& o, Coord y, Coord c_lo, Coord c_hi) {
  if (o.dim() != 2) throw UsageError("bracketed_zero_in_row: oracle must be 2-dimensional");
  if (c_lo > c_hi) {
    throw InstanceInvalid("row " + std::to_string(y) + ": empty column bracket [" +
                          std::to_string(c_lo) + "," + std::to_string(c_hi) + "]");
  }
  Coord l = c_lo;
  Coord r = c_hi;
  while (r - l > 1) {
    const Coord m = floor_mid(l, r);
    const int s = o.query(Point{m, y})[0];
    if (s == 0) return m;
    if (s > 0) {
      l = m;
    } else {
      r = m;
    }
  }
  if (o.query(Point{l, y})[0] == 0) return l;
  if (r != l && o.query(Point{r, y})[0] == 0) return r;
  throw InstanceInvalid("row " + std::to_string(y) + ": bracket [" + std::to_string(c_lo) + "," +
                        std::to_string(c_hi) + "] holds no zero of the first sign");
}

StarSolution solve_star_2d_staircase(const SignOracle& o) {
  require_shape(o, 2, "solve_star_2d_staircase");
  const Box& box = o.box();
  auto rows = std::make_shared<std::map<Coord, Coord>>();

  auto raw = [o, rows, box](const Point& yp) {
    const Coord y = yp[0];
    Coord c_lo = box.lo()[0];
    Coord c_hi = box.hi()[0];
    for (const auto& [row, c] : *rows) {
      if (row < y) c_lo = std::max(c_lo, c);
      if (row > y) c_hi = std::min(c_hi, c);
    }
    const Coord c = bracketed_zero_in_row(o, y, c_lo, c_hi);
    (*rows)[y] = c;
    const SignVector g = o.query(Point{c, y});
    return SignVector{g[1], g[2]};
  };
  const SignOracle h =
      SignOracle::root(Box(Point{box.lo()[1]}, Point{box.hi()[1]}), 2, raw, "staircase_rows");
  const StarSolution sol = solve_star_1d(h);
  const Point x{rows->at(sol.point[0]), sol.point[0]};
  return make_solution(x, o.query(x));
}

StarSolution solve_star_2d_fps(const SignOracle& o) {
  require_shape(o, 2, "solve_star_2d_fps");
  Coord x0 = o.box().lo()[0];
  Coord x1 = o.box().hi()[0];
  Coord y0 = o.box().lo()[1];
  Coord y1 = o.box().hi()[1];

  // Applies every half-cut allowed by the midpoint signs; true if the
  // rectangle got smaller.
  auto cut = [&](Coord mx, Coord my, const SignVector& s) {
    const int s1 = s[0];
    const int s2 = s[1];
    const int b = s[2];
    bool shrunk = false;
    if (s2 <= 0 && b >= 0 && my < y1) {
      y1 = my;
      shrunk = true;
    }
    if (s2 >= 0 && b <= 0 && my > y0) {
      y0 = my;
      shrunk = true;
    }
    if (s1 <= 0 && b >= 0 && mx < x1) {
      x1 = mx;
      shrunk = true;
    }
    if (s1 >= 0 && b <= 0 && mx > x0) {
      x0 = mx;
      shrunk = true;
    }
    return shrunk;
  };

  while (x1 - x0 >= 2 || y1 - y0 >= 2) {
    const Coord mx = floor_mid(x0, x1);
    const Coord my = floor_mid(y0, y1);
    const SignVector s = o.query(Point{mx, my});
    if (s.uniform()) return make_solution(Point{mx, my}, s);
    if (cut(mx, my, s)) continue;

    // Floor midpoints of a side of length 2 sit on the low edge; retry
    // with the high end of that side.
    const Coord mx2 = x1 - x0 == 1 ? x1 : mx;
    const Coord my2 = y1 - y0 == 1 ? y1 : my;
    if (mx2 == mx && my2 == my) {
      throw InstanceInvalid("no admissible cut at " + Point{mx, my}.str() + " with signs " + s.str());
    }
    const SignVector s2 = o.query(Point{mx2, my2});
    if (s2.uniform()) return make_solution(Point{mx2, my2}, s2);
    if (!cut(mx2, my2, s2)) {
      throw InstanceInvalid("no admissible cut at " + Point{mx2, my2}.str() + " with signs " +
                            s2.str());
    }
  }
  for (Coord x = x0; x <= x1; ++x) {
    for (Coord y = y0; y <= y1; ++y) {
      const SignVector s = o.query(Point{x, y});
      if (s.uniform()) return make_solution(Point{x, y}, s);
    }
  }
  throw InstanceInvalid("no solution in final rectangle " + Box(Point{x0, y0}, Point{x1, y1}).str());
}

RefinedWitness solve_refined_star(const SignOracle& o, const StarSolver& A, const SolverConfig& cfg) {
  if (o.outputs() != o.dim() + 1) throw UsageError("solve_refined_star: expected k+1 outputs");
  if (cfg.trace != nullptr) ++cfg.trace->refined_calls;

  RefinedWitness w{o.box().lo(), o.box().hi(), 0, 0};
  const StarSolution first = A(collapse_last_up(o));
  ++w.solver_calls;
  const SignVector g = o.query(first.point);
  if (g.back() >= 0) {
    w.p_left = first.point;
  } else {
    w.p_right = first.point;
  }
  if (g.back() != 0) {
    w.which_case = g.back() > 0 ? 1 : 2;
  } else {
    const SignOracle down = collapse_last_down(box_restriction(o, Box(w.p_left, w.p_right), cfg.debug_checks));
    const StarSolution second = A(down);
    ++w.solver_calls;
    if (o.query(second.point).back() > 0) {
      w.p_left = second.point;
      w.which_case = 1;
    } else {
      w.p_right = second.point;
      w.which_case = 3;
    }
  }
  if (cfg.trace != nullptr) {
    cfg.trace->max_refined_solver_calls =
        std::max<std::uint64_t>(cfg.trace->max_refined_solver_calls, w.solver_calls);
  }
  return w;
}

StarSolution decompose_star(const SignOracle& o, std::size_t a, std::size_t b, const StarSolver& A,
                            const StarSolver& B, const SolverConfig& cfg) {
  if (a < 1 || b < 1 || o.dim() != a + b || o.outputs() != a + b + 1) {
    throw UsageError("decompose_star: need a,b >= 1 and an (a+b)-dim oracle with a+b+1 outputs");
  }
  const Box xa = o.box().slice(0, a);
  const Box xb = o.box().slice(a, b);
  DecompositionLedger ledger{a, b, {}};
  std::optional<StarSolution> found;
  if (cfg.trace != nullptr) ++cfg.trace->decompositions;

  auto round = [&](const Point& q) -> SignVector {
    Point pl = xa.lo();
    Point pr = xa.hi();
    if (cfg.warm_start) {
      std::vector<Point> lows{xa.lo()};
      std::vector<Point> highs{xa.hi()};
      for (const LedgerRound& rd : ledger.rounds) {
        if (leq(rd.q, q)) lows.push_back(rd.p_left);
        if (leq(q, rd.q)) highs.push_back(rd.p_right);
      }
      pl = lub(lows);
      pr = glb(highs);
    }

    std::size_t calls = 0;
    for (std::size_t j = a + 1; j <= a + b + 1; ++j) {
      if (!leq(pl, pr)) {
        report(cfg, 'b', "witness pair " + pl.str() + " > " + pr.str() + " at q=" + q.str());
        throw InstanceInvalid("witness pair out of order at q=" + q.str());
      }
      const SignOracle gj = box_restriction(project_last(o, q, a, j), Box(pl, pr), cfg.debug_checks);
      const RefinedWitness w = solve_refined_star(gj, A, cfg);
      ++calls;
      pl = w.p_left;
      pr = w.p_right;
    }
    if (calls != b + 1) {
      report(cfg, 'e', std::to_string(calls) + " refined calls in round at q=" + q.str());
    }

    const SignVector full = o.query(pl.concat(q));
    SignVector r(b + 1);
    for (std::size_t t = 0; t <= b; ++t) r.set(t, full[a + t]);

    if (cfg.debug_checks) {
      DebugQueryScope scope(o.stats_handle());
      const SignVector gl = o.query(pl.concat(q));
      const SignVector gr = o.query(pr.concat(q));
      if (!leq(pl, pr)) report(cfg, 'b', "p_left " + pl.str() + " not <= p_right " + pr.str());
      for (std::size_t t = 0; t < a; ++t) {
        if (gl[t] < 0 || gr[t] > 0) {
          report(cfg, 'b', "q=" + q.str() + " output " + std::to_string(t + 1) + ": g(p_left)=" +
                               gl.str() + " g(p_right)=" + gr.str());
          break;
        }
      }
      for (std::size_t t = a; t <= a + b; ++t) {
        if (gl[t] != gr[t]) {
          report(cfg, 'c', "q=" + q.str() + " output " + std::to_string(t + 1) + ": g(p_left)=" +
                               gl.str() + " g(p_right)=" + gr.str());
          break;
        }
      }
      if (ledger.rounds.size() < kLedgerPairwiseLimit) {
        auto consistent = [&](const Point& q1, const SignVector& r1, const Point& q2,
                              const SignVector& r2) {
          for (std::size_t t = 0; t < b; ++t) {
            if (q1[t] + r1[t] > q2[t] + r2[t]) return false;
          }
          return r1[b] <= r2[b];
        };
        for (const LedgerRound& rd : ledger.rounds) {
          const bool below = leq(rd.q, q) && !consistent(rd.q, rd.r, q, r);
          const bool above = leq(q, rd.q) && !consistent(q, r, rd.q, rd.r);
          if (below || above) {
            report(cfg, 'a', "rounds q=" + rd.q.str() + " r=" + rd.r.str() + " and q=" + q.str() +
                                 " r=" + r.str());
          }
        }
      }
    }

    ledger.rounds.push_back({q, r, pl, pr});
    if (cfg.trace != nullptr) ++cfg.trace->rounds;
    if (!found) {
      if (r.uniform_nonneg()) {
        found = make_solution(pl.concat(q), full);
      } else if (r.uniform_nonpos()) {
        const Point x = pr.concat(q);
        found = make_solution(x, o.query(x));
      }
      if (found) throw InlineReturn{&ledger};
    }
    return r;
  };

  const SignOracle h = SignOracle::root(xb, b + 1, round, "virtual");
  try {
    const StarSolution outer = B(h);
    throw SolverContractError("outer solver returned " + outer.point.str() +
                              " without querying a uniform virtual answer");
  } catch (const InlineReturn& stop) {
    if (stop.owner != &ledger) throw;
  }
  if (cfg.trace != nullptr) cfg.trace->last_ledger = std::move(ledger);
  return *found;
}

StarSolution solve_star(const SignOracle& o, const SolverConfig& cfg) {
  if (cfg.trace != nullptr) ++cfg.trace->star_calls;
  auto base2d = [&cfg](const SignOracle& s) {
    return cfg.base2d == Base2d::Fps ? solve_star_2d_fps(s) : solve_star_2d_staircase(s);
  };
  switch (o.dim()) {
    case 0: throw UsageError("solve_star: dimension must be >= 1");
    case 1: return solve_star_1d(o);
    case 2: return base2d(o);
    default: break;
  }
  const StarSolver A = [&cfg](const SignOracle& s) { return solve_star(s, cfg); };
  return decompose_star(o, o.dim() - 2, 2, A, base2d, cfg);
}

}  // namespace tarski
