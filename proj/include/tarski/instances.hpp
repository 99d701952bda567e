#ifndef TARSKI_INSTANCES_HPP
#define TARSKI_INSTANCES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tarski/lattice.hpp"
#include "tarski/sign_oracle.hpp"

namespace tarski {

enum class InstanceKind { HiddenPoint, ConstantShift, RandomSteps, ExplicitTable, ExplicitSignTable };

std::string kind_name(InstanceKind kind);
/// Throws UsageError on an unknown name.
InstanceKind parse_kind(const std::string& name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::HiddenPoint;
  std::vector<Coord> sides;
  Point p;                      // hidden_point
  std::vector<Coord> v;         // constant_shift
  std::uint64_t seed = 0;       // random_steps
  std::uint64_t num_steps = 16; // random_steps
  std::vector<Point> values;    // explicit_table, row-major
  std::vector<SignVector> signs;  // explicit_sign_table, row-major

  Box box() const { return Box::from_sides(sides); }
  bool is_sign_instance() const { return kind == InstanceKind::ExplicitSignTable; }

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

FnOracle gen_hidden_point(const Box& box, const Point& p);
FnOracle gen_constant_shift(const Box& box, const std::vector<Coord>& v);
FnOracle gen_random_steps(const Box& box, std::uint64_t seed, std::uint64_t num_steps);
/// f(x)_i = max({lo_i} u {w : (s, w) in steps[i], s <= x}).
using StepSet = std::vector<std::vector<std::pair<Point, Coord>>>;
FnOracle gen_steps(const Box& box, StepSet steps);
/// Sign oracle with the unique solution p: g_i = sgn(p_i - x_i) for
/// i < k and g_k = sgn(sum_i w_i (x_i - p_i)) with positive weights.
SignOracle gen_sign_hidden_point(const Box& box, const Point& p, const std::vector<Coord>& weights);

/// Map given by an explicit row-major table (not validated here).
FnOracle from_table(const Box& box, std::vector<Point> values);

/// Builds the map of a function instance; UsageError for sign instances.
FnOracle instantiate(const InstanceSpec& spec);
/// Builds the oracle of an explicit_sign_table instance.
SignOracle instantiate_sign(const InstanceSpec& spec);

/// Document round trip. parse_* throws LoadError on malformed input or on an
/// explicit table that fails validation.
std::string serialize_instance(const InstanceSpec& spec);
InstanceSpec parse_instance(const std::string& document);
InstanceSpec load_instance(const std::string& path);
void save_instance(const InstanceSpec& spec, const std::string& path);

/// Visits every monotone f: box -> [lo, hi] with lo(i) <= f(i) <= hi(i) per
/// row-major index i, as a row-major value vector. Backtracking with the
/// lower bound max over predecessors x - e_j.
void for_each_monotone_chain_map(const Box& box, const std::vector<Coord>& lo,
                                 const std::vector<Coord>& hi,
                                 const std::function<void(const std::vector<Coord>&)>& visit);

/// Number of monotone self-maps of `box` (product of per-coordinate counts).
std::uint64_t count_monotone_maps(const Box& box, std::uint64_t cap = 10'000'000);
/// Visits every monotone self-map as a row-major table. UsageError if the
/// count exceeds `cap`.
void for_each_monotone_map(const Box& box, const std::function<void(const std::vector<Point>&)>& visit,
                           std::uint64_t cap = 1'000'000);
std::vector<std::vector<Point>> enumerate_monotone_maps(const Box& box, std::uint64_t cap = 100'000);

/// Visits every sign table satisfying the range and monotone conditions on
/// `box` (k+1 outputs). UsageError if the count exceeds `cap`.
void for_each_valid_sign_table(const Box& box,
                               const std::function<void(const std::vector<SignVector>&)>& visit,
                               std::uint64_t cap = 10'000'000);
std::uint64_t count_valid_sign_tables(const Box& box, std::uint64_t cap = 10'000'000);

}  // namespace tarski

#endif  // TARSKI_INSTANCES_HPP
