#ifndef TARSKI_BENCH_HPP
#define TARSKI_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarski/instances.hpp"
#include "tarski/star_solvers.hpp"
#include "tarski/tarski_outer.hpp"

namespace tarski::bench {

/// Benchmark families: hidden_point, constant_shift, random_steps, coupled_point.
const std::vector<std::string>& families();

/// coupled_point: f_i = clamp(x_i + sgn(-(x_i - p_i) + sum_{j>i} (x_j - p_j))).
/// Monotone with the unique interior fixed point p; the inner fixed point
/// moves with the outer coordinates, unlike hidden_point.
FnOracle gen_coupled_point(const Box& box, const Point& p);

/// The instance of `family` for one benchmark cell, fully determined by the
/// arguments.
FnOracle make_instance(const std::string& family, std::size_t k, Coord n, std::uint64_t cell_seed,
                       std::uint64_t num_steps = 16);

struct BenchRecord {
  std::string instance_id;
  std::string family;
  std::string sides;
  std::size_t k = 0;
  std::string algorithm;
  std::string base2d_config;
  std::uint64_t distinct_queries = 0;
  std::uint64_t total_queries = 0;
  std::uint64_t rounds = 0;
  bool valid = false;
  std::uint64_t wall_time_ns = 0;
  std::uint64_t seed = 0;
};

/// One algorithm column of a sweep: "new" (with base2d) , "dqy" or "brute".
struct AlgoSpec {
  std::string name;
  Base2d base2d = Base2d::Fps;

  std::string label() const;
};

/// Parses "new,dqy,new-staircase,brute"; plain "new" takes `default_base`.
std::vector<AlgoSpec> parse_algos(const std::string& list, Base2d default_base);
/// Parses "LO..HI", "LO..HIxSTEP" (geometric) or "a,b,c".
std::vector<Coord> parse_n_grid(const std::string& text);

struct SweepConfig {
  std::string family = "hidden_point";
  std::size_t k = 3;
  std::vector<Coord> n_grid;
  std::uint64_t reps = 10;
  std::uint64_t seed = 1;
  std::vector<AlgoSpec> algos;
  std::uint64_t num_steps = 16;
  bool debug_checks = false;
  bool parallel = true;
};

BenchRecord run_one(const std::string& family, std::size_t k, Coord n, std::uint64_t rep,
                    std::uint64_t seed, const AlgoSpec& algo, std::uint64_t num_steps = 16,
                    bool debug_checks = false);

/// Records in (n, rep, algorithm) order regardless of thread count.
std::vector<BenchRecord> run_sweep(const SweepConfig& cfg);

void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const std::vector<BenchRecord>& records);

struct SummaryRow {
  std::string algorithm;
  Coord n = 0;
  std::uint64_t count = 0;
  std::uint64_t max_distinct = 0;
  double median_distinct = 0;
  double ratio[5] = {0, 0, 0, 0, 0};  // max / (log2 n)^e, e = 1..4
};

struct Summary {
  std::vector<SummaryRow> rows;  // grouped by algorithm, n ascending
  /// Per algorithm: smallest e in 1..4 whose ratio is non-increasing over the
  /// top half of the grid (0 if none).
  std::vector<std::pair<std::string, int>> flagged_exponent;
};

/// A sequence is non-increasing within `tol` if every later value is at most
/// (1 + tol) times every earlier one.
bool non_increasing_within(const std::vector<double>& values, double tol);

Summary summarize(const std::vector<BenchRecord>& records, double tol = 0.10);
void write_summary(std::ostream& os, const Summary& s);

}  // namespace tarski::bench

#endif  // TARSKI_BENCH_HPP
