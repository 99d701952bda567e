#include "tarski/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "tarski/errors.hpp"
#include "tarski/rng.hpp"

namespace tarski::bench {

const std::vector<std::string>& families() {
  static const std::vector<std::string> f{"hidden_point", "constant_shift", "random_steps",
                                          "coupled_point"};
  return f;
}

FnOracle gen_coupled_point(const Box& box, const Point& p) {
  if (!box.contains(p)) throw UsageError("coupled point " + p.str() + " outside " + box.str());
  return FnOracle(box, [box, p](const Point& x) {
    Point y = x;
    const std::size_t k = x.dim();
    for (std::size_t i = 0; i < k; ++i) {
      Coord t = p[i] - x[i];
      for (std::size_t j = i + 1; j < k; ++j) t += x[j] - p[j];
      y[i] = std::clamp(x[i] + sgn(t), box.lo()[i], box.hi()[i]);
    }
    return y;
  });
}

FnOracle make_instance(const std::string& family, std::size_t k, Coord n, std::uint64_t cell_seed,
                       std::uint64_t num_steps) {
  const Box box = Box::cube(k, n);
  Xorshift64Star rng(cell_seed);
  if (family == "hidden_point" || family == "coupled_point") {
    Point p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = rng.uniform(1, n);
    return family == "hidden_point" ? gen_hidden_point(box, p) : gen_coupled_point(box, p);
  }
  if (family == "constant_shift") {
    std::vector<Coord> v(k);
    for (auto& c : v) c = rng.uniform(-1, 1);
    return gen_constant_shift(box, v);
  }
  if (family == "random_steps") return gen_random_steps(box, cell_seed, num_steps);
  throw UsageError("unknown family: " + family);
}

std::string AlgoSpec::label() const {
  return name == "new" ? "new-" + base2d_name(base2d) : name;
}

std::vector<AlgoSpec> parse_algos(const std::string& list, Base2d default_base) {
  std::vector<AlgoSpec> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "new") {
      out.push_back({"new", default_base});
    } else if (tok == "new-fps") {
      out.push_back({"new", Base2d::Fps});
    } else if (tok == "new-staircase") {
      out.push_back({"new", Base2d::Staircase});
    } else if (tok == "dqy" || tok == "brute") {
      out.push_back({tok, default_base});
    } else {
      throw UsageError("unknown algorithm: " + tok);
    }
  }
  if (out.empty()) throw UsageError("empty algorithm list");
  return out;
}

std::vector<Coord> parse_n_grid(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad n-grid: " + text);
    }
    if (used != s.size() || v < 1 || v > kMaxSide) throw UsageError("bad n-grid: " + text);
    return static_cast<Coord>(v);
  };
  std::vector<Coord> grid;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(to_int(tok));
  } else {
    const Coord lo = to_int(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    Coord step = 2;
    if (auto x = rest.find('x'); x != std::string::npos) {
      step = to_int(rest.substr(x + 1));
      rest = rest.substr(0, x);
    }
    const Coord hi = to_int(rest);
    if (step < 2 || lo > hi) throw UsageError("bad n-grid: " + text);
    for (Coord n = lo; n <= hi; n *= step) {
      grid.push_back(n);
      if (n > hi / step) break;
    }
  }
  if (grid.empty()) throw UsageError("empty n-grid");
  return grid;
}

BenchRecord run_one(const std::string& family, std::size_t k, Coord n, std::uint64_t rep,
                    std::uint64_t seed, const AlgoSpec& algo, std::uint64_t num_steps,
                    bool debug_checks) {
  const std::uint64_t cell_seed = mix_seed(mix_seed(seed, k), static_cast<std::uint64_t>(n), rep);
  BenchRecord rec;
  rec.instance_id = family + "-k" + std::to_string(k) + "-n" + std::to_string(n) + "-r" +
                    std::to_string(rep);
  rec.family = family;
  for (std::size_t i = 0; i < k; ++i) rec.sides += (i ? "x" : "") + std::to_string(n);
  rec.k = k;
  rec.algorithm = algo.name;
  rec.base2d_config = algo.name == "new" ? base2d_name(algo.base2d) : "-";
  rec.seed = cell_seed;

  const FnOracle f = make_instance(family, k, n, cell_seed, num_steps);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    TarskiResult res;
    if (algo.name == "new") {
      SolverConfig cfg;
      cfg.base2d = algo.base2d;
      cfg.debug_checks = debug_checks;
      res = solve_tarski(f, cfg);
    } else if (algo.name == "dqy") {
      res = solve_tarski_dqy(f);
    } else {
      res = solve_tarski_brute(f);
    }
    rec.distinct_queries = res.stats.distinct_queries;
    rec.total_queries = res.stats.total_queries;
    rec.rounds = res.rounds;
    rec.valid = res.verified;
  } catch (const std::exception&) {
    rec.valid = false;
    rec.distinct_queries = f.stats().distinct_queries;
    rec.total_queries = f.stats().total_queries;
  }
  rec.wall_time_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
          .count());
  return rec;
}

std::vector<BenchRecord> run_sweep(const SweepConfig& cfg) {
  const std::size_t per_cell = cfg.algos.size();
  const std::size_t cells = cfg.n_grid.size() * cfg.reps;
  std::vector<BenchRecord> out(cells * per_cell);
  const auto total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    const std::size_t cell = u / per_cell;
    const Coord n = cfg.n_grid[cell / cfg.reps];
    const std::uint64_t rep = cell % cfg.reps;
    out[u] = run_one(cfg.family, cfg.k, n, rep, cfg.seed, cfg.algos[u % per_cell], cfg.num_steps,
                     cfg.debug_checks);
  }
  return out;
}

void write_csv_header(std::ostream& os) {
  os << "instance_id,family,sides,k,algorithm,base2d_config,distinct_queries,total_queries,rounds,"
        "valid,wall_time_ns,seed\n";
}

void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  write_csv_header(os);
  for (const auto& r : records) {
    os << r.instance_id << ',' << r.family << ',' << r.sides << ',' << r.k << ',' << r.algorithm
       << ',' << r.base2d_config << ',' << r.distinct_queries << ',' << r.total_queries << ','
       << r.rounds << ',' << (r.valid ? "true" : "false") << ',' << r.wall_time_ns << ','
       << r.seed << '\n';
  }
}

bool non_increasing_within(const std::vector<double>& values, double tol) {
  for (std::size_t j = 1; j < values.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (values[j] > (1.0 + tol) * values[i]) return false;
    }
  }
  return true;
}

Summary summarize(const std::vector<BenchRecord>& records, double tol) {
  std::map<std::string, std::map<Coord, std::vector<std::uint64_t>>> groups;
  std::vector<std::string> order;
  for (const auto& r : records) {
    const std::string label = r.algorithm == "new" ? "new-" + r.base2d_config : r.algorithm;
    if (!groups.count(label)) order.push_back(label);
    const Coord n = std::stoll(r.sides.substr(0, r.sides.find('x')));
    groups[label][n].push_back(r.distinct_queries);
  }
  Summary s;
  for (const auto& label : order) {
    std::vector<std::vector<double>> series(5);
    for (auto& [n, qs] : groups[label]) {
      std::sort(qs.begin(), qs.end());
      SummaryRow row;
      row.algorithm = label;
      row.n = n;
      row.count = qs.size();
      row.max_distinct = qs.back();
      const std::size_t m = qs.size();
      row.median_distinct = m % 2 ? static_cast<double>(qs[m / 2])
                                  : 0.5 * static_cast<double>(qs[m / 2 - 1] + qs[m / 2]);
      const double lg = std::log2(static_cast<double>(n));
      for (int e = 1; e <= 4; ++e) {
        row.ratio[e] = lg > 0 ? static_cast<double>(row.max_distinct) / std::pow(lg, e) : 0.0;
        series[e].push_back(row.ratio[e]);
      }
      s.rows.push_back(row);
    }
    int flagged = 0;
    for (int e = 1; e <= 4 && flagged == 0; ++e) {
      const auto& v = series[e];
      std::vector<double> top(v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
      if (!top.empty() && non_increasing_within(top, tol)) flagged = e;
    }
    s.flagged_exponent.emplace_back(label, flagged);
  }
  return s;
}

void write_summary(std::ostream& os, const Summary& s) {
  os << std::left << std::setw(16) << "algorithm" << std::setw(10) << "n" << std::setw(7) << "runs"
     << std::setw(8) << "max" << std::setw(9) << "median";
  for (int e = 1; e <= 4; ++e) os << std::setw(12) << ("max/lg^" + std::to_string(e));
  os << '\n';
  for (const auto& r : s.rows) {
    os << std::setw(16) << r.algorithm << std::setw(10) << r.n << std::setw(7) << r.count
       << std::setw(8) << r.max_distinct << std::setw(9) << r.median_distinct;
    for (int e = 1; e <= 4; ++e) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(4) << r.ratio[e];
      os << std::setw(12) << cell.str();
    }
    os << '\n';
  }
  for (const auto& [label, e] : s.flagged_exponent) {
    os << label << ": smallest exponent with non-increasing ratio over the top half: "
       << (e ? std::to_string(e) : std::string("none in 1..4")) << '\n';
  }
}

}  // namespace tarski::bench
