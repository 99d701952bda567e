#include "tarski/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "tarski/bench.hpp"
#include "tarski/errors.hpp"
#include "tarski/instances.hpp"
#include "tarski/rng.hpp"
#include "tarski/tarski_outer.hpp"

namespace tarski::verify {

namespace {

struct CaseResult {
  std::uint64_t assertions = 0;
  std::uint64_t failures = 0;
  std::string first;
  std::string repro;

  void check(bool cond, const std::string& what) {
    ++assertions;
    if (cond) return;
    if (failures++ == 0) first = repro.empty() ? what : what + " [" + repro + "]";
  }
};

// Runs body(i, result) for i in [0, count), possibly in parallel, and merges
// the results in index order.
template <class Body>
void run_cases(SuiteReport& rep, std::size_t count, bool parallel, Body&& body) {
  std::vector<CaseResult> res(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    CaseResult& r = res[static_cast<std::size_t>(i)];
    try {
      body(static_cast<std::size_t>(i), r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
  }
  for (const CaseResult& r : res) {
    ++rep.instances;
    rep.assertions += r.assertions;
    if (r.failures > 0 && rep.failures == 0) rep.first_failure = r.first;
    rep.failures += r.failures;
  }
}

std::uint64_t ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

std::string sides_str(const std::vector<Coord>& sides) {
  std::string s = "[";
  for (std::size_t i = 0; i < sides.size(); ++i) s += (i ? "," : "") + std::to_string(sides[i]);
  return s + "]";
}

SolverConfig checked_config(Base2d base, SolverTrace* trace = nullptr) {
  SolverConfig cfg;
  cfg.base2d = base;
  cfg.debug_checks = true;
  cfg.trace = trace;
  return cfg;
}

std::uint64_t limit(const VerifyOptions& o, std::uint64_t dflt) {
  return o.cap == 0 ? dflt : std::min(o.cap, dflt);
}

class Timer {
 public:
  explicit Timer(SuiteReport& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  SuiteReport& r_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

void SuiteReport::check(bool cond, const std::string& what) {
  ++assertions;
  if (cond) return;
  if (failures++ == 0) first_failure = what;
}

std::string witness_problem(const SignOracle& o, const RefinedWitness& w) {
  const std::size_t k = o.dim();
  if (!leq(w.p_left, w.p_right)) return "p_left " + w.p_left.str() + " not <= p_right " + w.p_right.str();
  const SignVector gl = o.evaluate(w.p_left);
  const SignVector gr = o.evaluate(w.p_right);
  for (std::size_t t = 0; t < k; ++t) {
    if (gl[t] < 0 || gr[t] > 0) {
      return "sign condition fails at output " + std::to_string(t + 1) + ": g(p_left)=" + gl.str() +
             " g(p_right)=" + gr.str();
    }
  }
  const bool c1 = gl.back() == 1;
  const bool c2 = gr.back() == -1;
  const bool c3 = gl.back() == 0 && gr.back() == 0;
  if (int(c1) + int(c2) + int(c3) != 1) {
    return "cases held: " + std::to_string(int(c1) + int(c2) + int(c3)) + " (g(p_left)=" + gl.str() +
           " g(p_right)=" + gr.str() + ")";
  }
  const int actual = c1 ? 1 : (c2 ? 2 : 3);
  if (actual != w.which_case) {
    return "reported case " + std::to_string(w.which_case) + " but case " + std::to_string(actual) +
           " holds";
  }
  if (w.solver_calls > 2) return std::to_string(w.solver_calls) + " calls to the Tarski* solver";
  return {};
}

std::string solution_problem(const SignOracle& o, const StarSolution& s) {
  const SignVector fresh = o.evaluate(s.point);
  if (!(fresh == s.signs)) return "signs " + s.signs.str() + " differ from fresh " + fresh.str();
  if (s.polarity == Polarity::Nonneg && !fresh.uniform_nonneg()) {
    return "nonneg polarity with signs " + fresh.str();
  }
  if (s.polarity == Polarity::Nonpos && !fresh.uniform_nonpos()) {
    return "nonpos polarity with signs " + fresh.str();
  }
  return {};
}

// ---------------------------------------------------------------------------

SuiteReport exhaustive_small(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "exhaustive-small";
  Timer timer(rep);
  struct Target {
    std::vector<Coord> sides;
    std::uint64_t expected;
  };
  // Counts come from an independent filter over all maps (see tests).
  const std::vector<Target> targets{{{2}, 3}, {{3}, 10}, {{2, 2}, 36}, {{3, 3}, 30625}};
  for (const auto& target : targets) {
    const Box box = Box::from_sides(target.sides);
    const auto maps = enumerate_monotone_maps(box, 100'000);
    rep.check(maps.size() == target.expected,
              "monotone map count on " + sides_str(target.sides) + ": " +
                  std::to_string(maps.size()) + " != " + std::to_string(target.expected));
    run_cases(rep, maps.size(), opts.parallel, [&](std::size_t i, CaseResult& r) {
      r.repro = "explicit_table sides=" + sides_str(target.sides) + " map#" + std::to_string(i);
      const FnOracle f = from_table(box, maps[i]);
      const auto fixed = all_fixed_points(f, box, false);
      const std::set<Point> fixed_set(fixed.begin(), fixed.end());
      auto member = [&](const TarskiResult& res, const char* who) {
        r.check(res.verified && fixed_set.count(res.point) == 1,
                std::string(who) + " returned " + res.point.str() + ", not a fixed point");
      };
      member(solve_tarski(f.fresh(), checked_config(Base2d::Fps)), "new-fps");
      member(solve_tarski(f.fresh(), checked_config(Base2d::Staircase)), "new-staircase");
      member(solve_tarski_dqy(f.fresh()), "dqy");
      member(solve_tarski_brute(f.fresh()), "brute");
    });
    rep.notes.push_back(sides_str(target.sides) + ": " + std::to_string(maps.size()) + " maps");
  }
  return rep;
}

SuiteReport random_correctness(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "random";
  Timer timer(rep);
  static const char* fams[] = {"hidden_point", "constant_shift", "random_steps"};
  static const Coord ns[] = {4, 16, 64};
  const std::uint64_t count = limit(opts, 10'000);
  run_cases(rep, count, opts.parallel, [&](std::size_t i, CaseResult& r) {
    const std::string fam = fams[i % 3];
    const std::size_t k = 2 + (i / 3) % 4;
    const Coord n = ns[(i / 12) % 3];
    const std::uint64_t cell = mix_seed(opts.seed, i);
    r.repro = "family=" + fam + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
              " cell_seed=" + std::to_string(cell);
    const FnOracle f = bench::make_instance(fam, k, n, cell);
    for (Base2d base : {Base2d::Fps, Base2d::Staircase}) {
      SolverConfig cfg;
      cfg.base2d = base;
      cfg.debug_checks = false;
      const auto res = solve_tarski(f.fresh(), cfg);
      r.check(res.verified, "new-" + base2d_name(base) + " returned non-fixed " + res.point.str());
    }
    const auto d = solve_tarski_dqy(f.fresh());
    r.check(d.verified, "dqy returned non-fixed " + d.point.str());
  });
  rep.notes.push_back(std::to_string(count) + " instances x 3 algorithms");
  return rep;
}

SuiteReport invariants(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "invariants";
  Timer timer(rep);
  static const char* fams[] = {"hidden_point", "random_steps", "coupled_point", "constant_shift"};
  static const Coord ns[] = {8, 16, 32};
  const std::uint64_t count = limit(opts, 1'000);
  std::vector<SolverTrace> traces(count);
  run_cases(rep, count, opts.parallel, [&](std::size_t i, CaseResult& r) {
    SolverTrace& trace = traces[i];
    const std::uint64_t cell = mix_seed(opts.seed, i, 0x1f);
    SolverConfig cfg = checked_config(i % 2 ? Base2d::Fps : Base2d::Staircase, &trace);
    cfg.throw_on_violation = false;
    if (i % 4 == 3) {
      // Direct Tarski* decomposition on a 3- or 4-dim sign oracle.
      Xorshift64Star rng(cell);
      const std::size_t k = 3 + (i / 4) % 2;
      std::vector<Coord> sides(k);
      Point p(k);
      std::vector<Coord> w(k);
      for (std::size_t t = 0; t < k; ++t) {
        sides[t] = rng.uniform(2, 24);
        p[t] = rng.uniform(1, sides[t]);
        w[t] = rng.uniform(1, 6);
      }
      r.repro = "sign_hidden_point sides=" + sides_str(sides) + " p=" + p.str();
      const SignOracle g = gen_sign_hidden_point(Box::from_sides(sides), p, w);
      const StarSolution s = solve_star(g, cfg);
      r.check(solution_problem(g, s).empty(), "solution: " + solution_problem(g, s));
      r.check(s.point == p, "unique solution " + p.str() + " missed, got " + s.point.str());
    } else {
      const std::string fam = fams[(i / 4 + i) % 4];
      const std::size_t k = 4 + i % 2;
      const Coord n = ns[(i / 8) % 3];
      r.repro = "family=" + fam + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                " cell_seed=" + std::to_string(cell);
      const FnOracle f = bench::make_instance(fam, k, n, cell);
      const auto res = solve_tarski(f, cfg);
      r.check(res.verified, "returned non-fixed " + res.point.str());
      r.check(f.stats().distinct_queries == f.counted_cache_size(),
              "distinct_queries differs from the root cache size");
    }
    r.check(trace.decompositions > 0, "run performed no decomposition");
    r.check(trace.max_refined_solver_calls <= 2, "refined call used more than 2 solver calls");
    for (const auto& v : trace.violations) r.check(false, std::string("(") + v.check + ") " + v.detail);
  });
  std::uint64_t per[5] = {0, 0, 0, 0, 0};
  std::uint64_t rounds = 0;
  std::uint64_t decomps = 0;
  for (const auto& t : traces) {
    for (int c = 0; c < 5; ++c) per[c] += t.count(static_cast<char>('a' + c));
    rounds += t.rounds;
    decomps += t.decompositions;
  }
  std::ostringstream os;
  os << "violations a=" << per[0] << " b=" << per[1] << " c=" << per[2] << " d=" << per[3]
     << " e=" << per[4] << "; " << decomps << " decompositions, " << rounds << " simulated rounds";
  rep.notes.push_back(os.str());
  return rep;
}

SuiteReport differential_2d(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "differential-2d";
  Timer timer(rep);
  const std::vector<std::vector<Coord>> boxes{{1, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  std::uint64_t disagreements = 0;
  for (const auto& sides : boxes) {
    const Box box = Box::from_sides(sides);
    std::vector<std::vector<SignVector>> batch;
    std::uint64_t index = 0;
    auto flush = [&] {
      std::vector<int> verdict(batch.size(), 0);
      const std::uint64_t base = index - batch.size();
      run_cases(rep, batch.size(), opts.parallel, [&](std::size_t i, CaseResult& r) {
        r.repro = "sign table #" + std::to_string(base + i) + " on " + sides_str(sides);
        bool ok[2] = {false, false};
        for (int which = 0; which < 2; ++which) {
          const SignOracle g = sign_table_oracle(box, batch[i]);
          try {
            const StarSolution s = which == 0 ? solve_star_2d_fps(g) : solve_star_2d_staircase(g);
            ok[which] = solution_problem(g, s).empty();
          } catch (const std::exception&) {
            ok[which] = false;
          }
        }
        r.check(ok[0], "fps returned an invalid solution");
        r.check(ok[1], "staircase returned an invalid solution");
        verdict[i] = ok[0] != ok[1];
      });
      for (int v : verdict) disagreements += static_cast<std::uint64_t>(v);
      batch.clear();
    };
    for_each_valid_sign_table(
        box,
        [&](const std::vector<SignVector>& t) {
          batch.push_back(t);
          ++index;
          if (batch.size() == 8192) flush();
        },
        10'000'000);
    flush();
    rep.notes.push_back(sides_str(sides) + ": " + std::to_string(index) + " valid sign tables");
  }
  rep.check(disagreements == 0, std::to_string(disagreements) + " validity disagreements");
  return rep;
}

SuiteReport budgets(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "budgets";
  Timer timer(rep);

  // 1-D: every valid sign oracle with n <= 6.
  std::uint64_t enumerated = 0;
  for (Coord n = 1; n <= 6; ++n) {
    const Box box = Box::cube(1, n);
    std::vector<std::vector<SignVector>> all;
    for_each_valid_sign_table(box, [&](const std::vector<SignVector>& t) { all.push_back(t); });
    enumerated += all.size();
    run_cases(rep, all.size(), opts.parallel, [&](std::size_t i, CaseResult& r) {
      r.repro = "1-D sign table #" + std::to_string(i) + " n=" + std::to_string(n);
      const SignOracle g = sign_table_oracle(box, all[i]);
      const StarSolution s = solve_star_1d(g);
      r.check(solution_problem(g, s).empty(), "invalid 1-D solution");
      r.check(g.stats().distinct_queries <= ceil_log2(static_cast<std::uint64_t>(n)) + 3,
              std::to_string(g.stats().distinct_queries) + " queries");
    });
  }
  rep.notes.push_back("1-D enumerated: " + std::to_string(enumerated) + " oracles, n<=6");

  // 1-D: random instances up to n = 2^20.
  const std::uint64_t random_1d = limit(opts, 1'000);
  run_cases(rep, random_1d, opts.parallel, [&](std::size_t i, CaseResult& r) {
    Xorshift64Star rng(mix_seed(opts.seed, i, 0x1d));
    const int e = static_cast<int>(i % 21);
    const Coord n = e == 0 ? 1 : rng.uniform((Coord{1} << (e - 1)) + 1, Coord{1} << e);
    r.repro = "1-D n=" + std::to_string(n) + " i=" + std::to_string(i);
    SignOracle g = i % 2 ? gen_sign_hidden_point(Box::cube(1, n), Point{rng.uniform(1, n)}, {1})
                         : slice_oracle(gen_random_steps(Box::cube(2, n), rng.next(), 16), 1,
                                        rng.uniform(1, n));
    const StarSolution s = solve_star_1d(g);
    r.check(solution_problem(g, s).empty(), "invalid 1-D solution");
    r.check(g.stats().distinct_queries <= ceil_log2(static_cast<std::uint64_t>(n)) + 3,
            std::to_string(g.stats().distinct_queries) + " queries");
  });

  // 2-D fps: n = 2^4..2^16, seeds per n.
  const std::uint64_t seeds = limit(opts, 100);
  std::vector<double> flat;
  double worst_c2 = 0;
  for (int e = 4; e <= 16; ++e) {
    const Coord n = Coord{1} << e;
    std::vector<std::uint64_t> q_hidden(seeds, 0);
    std::vector<std::uint64_t> q_steps(seeds, 0);
    run_cases(rep, seeds, opts.parallel, [&](std::size_t s, CaseResult& r) {
      Xorshift64Star rng(mix_seed(opts.seed, static_cast<std::uint64_t>(e), s));
      const Point p{rng.uniform(1, n), rng.uniform(1, n)};
      const std::vector<Coord> w{rng.uniform(1, 8), rng.uniform(1, 8)};
      r.repro = "2-D n=2^" + std::to_string(e) + " seed#" + std::to_string(s);
      const SignOracle g = gen_sign_hidden_point(Box::cube(2, n), p, w);
      const StarSolution a = solve_star_2d_fps(g);
      r.check(a.point == p, "fps missed the unique solution");
      q_hidden[s] = g.stats().distinct_queries;
      const SignOracle h = slice_oracle(gen_random_steps(Box::cube(3, n), rng.next(), 16), 2,
                                        rng.uniform(1, n));
      const StarSolution b = solve_star_2d_fps(h);
      r.check(solution_problem(h, b).empty(), "fps invalid on a random_steps slice");
      q_steps[s] = h.stats().distinct_queries;
      const double bound = kFpsC2 * (e + 1);
      r.check(static_cast<double>(q_hidden[s]) <= bound && static_cast<double>(q_steps[s]) <= bound,
              "fps over budget: " + std::to_string(std::max(q_hidden[s], q_steps[s])) + " > " +
                  std::to_string(bound));
    });
    const auto mh = *std::max_element(q_hidden.begin(), q_hidden.end());
    const auto ms = *std::max_element(q_steps.begin(), q_steps.end());
    worst_c2 = std::max(worst_c2, static_cast<double>(std::max(mh, ms)) / (e + 1));
    flat.push_back(static_cast<double>(mh) / e);
  }
  // Flatness over the top half of the grid (2^10..2^16).
  const std::vector<double> top(flat.begin() + 6, flat.end());
  double mean = 0;
  for (double v : top) mean += v;
  mean /= static_cast<double>(top.size());
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << "fps max/log2 n over 2^10..2^16:";
  bool flat_ok = true;
  for (double v : top) {
    os << ' ' << v;
    flat_ok = flat_ok && std::abs(v - mean) <= kFpsFlatnessTol * mean;
  }
  os << " (mean " << mean << "); worst queries/(log2 n + 1) = " << worst_c2 << ", frozen C2 = "
     << kFpsC2;
  rep.notes.push_back(os.str());
  rep.check(flat_ok, "fps max/log2 n not within 20% of its mean over the top half");
  return rep;
}

SuiteReport refined(const VerifyOptions& opts) {
  SuiteReport rep;
  rep.suite = "refined";
  Timer timer(rep);
  auto counted = [](StarSolver inner, int& calls) {
    return [inner = std::move(inner), &calls](const SignOracle& o) {
      ++calls;
      return inner(o);
    };
  };

  std::uint64_t enumerated = 0;
  for (Coord n = 1; n <= 5; ++n) {
    const Box box = Box::cube(1, n);
    std::vector<std::vector<SignVector>> all;
    for_each_valid_sign_table(box, [&](const std::vector<SignVector>& t) { all.push_back(t); });
    enumerated += all.size();
    run_cases(rep, all.size(), opts.parallel, [&](std::size_t i, CaseResult& r) {
      r.repro = "1-D sign table #" + std::to_string(i) + " n=" + std::to_string(n);
      const SignOracle g = sign_table_oracle(box, all[i]);
      int calls = 0;
      const RefinedWitness w = solve_refined_star(g, counted(solve_star_1d, calls), checked_config(Base2d::Fps));
      const std::string problem = witness_problem(g, w);
      r.check(problem.empty(), problem);
      r.check(calls <= 2 && calls == w.solver_calls, std::to_string(calls) + " solver calls");
    });
  }
  rep.notes.push_back("1-D enumerated: " + std::to_string(enumerated) + " oracles, n<=5");

  const std::uint64_t random_2d = limit(opts, 1'000);
  run_cases(rep, random_2d, opts.parallel, [&](std::size_t i, CaseResult& r) {
    Xorshift64Star rng(mix_seed(opts.seed, i, 0x2d));
    const std::vector<Coord> sides{rng.uniform(1, 64), rng.uniform(1, 64)};
    const Box box = Box::from_sides(sides);
    r.repro = "2-D sides=" + sides_str(sides) + " i=" + std::to_string(i);
    SignOracle g = [&]() {
      const Point p{rng.uniform(1, sides[0]), rng.uniform(1, sides[1])};
      switch (i % 3) {
        case 0: return gen_sign_hidden_point(box, p, {rng.uniform(1, 5), rng.uniform(1, 5)});
        case 1: {
          const Coord m = rng.uniform(1, 64);
          const Box b3 = Box::from_sides(std::vector<Coord>{sides[0], sides[1], m});
          return slice_oracle(gen_random_steps(b3, rng.next(), 1 + rng.below(24)), 2, rng.uniform(1, m));
        }
        default: {
          const Coord m = rng.uniform(1, 64);
          const Box b3 = Box::from_sides(std::vector<Coord>{sides[0], sides[1], m});
          const Point p3{p[0], p[1], rng.uniform(1, m)};
          return slice_oracle(bench::gen_coupled_point(b3, p3), 2, rng.uniform(1, m));
        }
      }
    }();
    int calls = 0;
    const RefinedWitness w =
        solve_refined_star(g, counted(solve_star_2d_fps, calls), checked_config(Base2d::Fps));
    const std::string problem = witness_problem(g, w);
    r.check(problem.empty(), problem);
    r.check(calls <= 2 && calls == w.solver_calls, std::to_string(calls) + " solver calls");
  });
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"exhaustive-small", "random", "invariants",
                                              "differential-2d", "budgets", "refined"};
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opts) {
  if (name == "exhaustive-small") return exhaustive_small(opts);
  if (name == "random") return random_correctness(opts);
  if (name == "invariants") return invariants(opts);
  if (name == "differential-2d") return differential_2d(opts);
  if (name == "budgets") return budgets(opts);
  if (name == "refined") return refined(opts);
  throw UsageError("unknown suite: " + name);
}

void write_report(std::ostream& os, const SuiteReport& r) {
  os << "suite " << r.suite << ": " << (r.ok() ? "PASS" : "FAIL") << " (" << r.instances
     << " instances, " << r.assertions << " assertions, " << r.failures << " failures, "
     << std::fixed << std::setprecision(1) << r.seconds << " s)\n";
  for (const auto& n : r.notes) os << "  " << n << '\n';
  if (!r.ok()) os << "  first failure: " << r.first_failure << '\n';
}

}  // namespace tarski::verify
