#ifndef TARSKI_SIGN_ORACLE_HPP
#define TARSKI_SIGN_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tarski/lattice.hpp"

namespace tarski {

using Sign = std::int8_t;

/// Element of {-1, 0, +1}^m.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::size_t m) : signs_(m, 0) {}
  SignVector(std::initializer_list<int> init);
  explicit SignVector(const std::vector<int>& signs);

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  void set(std::size_t i, int s);
  int back() const { return signs_.back(); }

  bool uniform_nonneg() const;
  bool uniform_nonpos() const;
  bool uniform() const { return uniform_nonneg() || uniform_nonpos(); }

  std::string str() const;

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<Sign> signs_;
};

/// Query accounting shared by a root oracle and every adapter built on it.
struct QueryStats {
  std::uint64_t total_queries = 0;
  std::uint64_t distinct_queries = 0;
  /// Root evaluations issued inside a DebugQueryScope; never part of a budget.
  std::uint64_t debug_queries = 0;
  std::map<std::string, std::uint64_t> per_adapter;
  int debug_depth = 0;
};

/// While alive, root evaluations are tagged as debug checks and do not count
/// toward total or distinct queries.
class DebugQueryScope {
 public:
  explicit DebugQueryScope(std::shared_ptr<QueryStats> stats);
  ~DebugQueryScope();
  DebugQueryScope(const DebugQueryScope&) = delete;
  DebugQueryScope& operator=(const DebugQueryScope&) = delete;

 private:
  std::shared_ptr<QueryStats> stats_;
};

/// Process-wide default for runtime invariant checks (TARSKI_DEBUG_CHECKS).
bool debug_checks_default();
void set_debug_checks_default(bool on);

/// Black-box monotone map f: box -> box with a deduplicating root cache.
class FnOracle {
 public:
  using Fn = std::function<Point(const Point&)>;

  FnOracle(Box box, Fn fn);

  const Box& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }

  /// Counted evaluation; throws UsageError outside the box.
  Point query(const Point& x) const;
  /// Fresh, uncounted evaluation that bypasses the cache.
  Point evaluate(const Point& x) const;
  /// Counted when `counted`, otherwise identical to evaluate().
  Point eval(const Point& x, bool counted) const { return counted ? query(x) : evaluate(x); }

  const QueryStats& stats() const { return *stats_; }
  std::shared_ptr<QueryStats> stats_handle() const { return stats_; }
  /// Points evaluated by counted queries (the size of the deduplicated root cache).
  std::size_t counted_cache_size() const;

  /// Same function, new stats and empty cache.
  FnOracle fresh() const { return FnOracle(box_, fn_); }

 private:
  struct Entry {
    Point value;
    bool counted = false;
  };
  using Cache = std::unordered_map<Point, Entry, PointHash>;

  Box box_;
  Fn fn_;
  std::shared_ptr<QueryStats> stats_;
  std::shared_ptr<Cache> cache_;
};

/// Queryable g: box -> {-1,0,1}^m. Roots own a cache; adapters forward to
/// their parent and share the root's QueryStats.
class SignOracle {
 public:
  /// Evaluates x; `counted` selects the accounted path or a fresh evaluation.
  using Eval = std::function<SignVector(const Point& x, bool counted)>;
  using RawEval = std::function<SignVector(const Point& x)>;

  /// Root oracle over a native sign function.
  static SignOracle root(Box box, std::size_t outputs, RawEval raw, std::string label = "g");
  /// Adapter sharing `stats`.
  SignOracle(Box box, std::size_t outputs, Eval eval, std::shared_ptr<QueryStats> stats,
             std::string label);

  const Box& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t outputs() const { return outputs_; }
  const std::string& label() const { return label_; }

  SignVector query(const Point& x) const;
  SignVector evaluate(const Point& x) const;
  SignVector eval(const Point& x, bool counted) const { return counted ? query(x) : evaluate(x); }

  const QueryStats& stats() const { return *stats_; }
  std::shared_ptr<QueryStats> stats_handle() const { return stats_; }

 private:
  void check_point(const Point& x) const;

  Box box_;
  std::size_t outputs_ = 0;
  Eval eval_;
  std::shared_ptr<QueryStats> stats_;
  std::string label_;
};

/// Fixes coordinate `dim` of f to `value`; the moved coordinate's sign goes last.
SignOracle slice_oracle(const FnOracle& f, std::size_t dim, Coord value);

/// Restriction of `o` to `sub`. With `check_certificates`, queries the two
/// corners (as debug queries) and throws InstanceInvalid unless
/// g(sub.lo)_t >= 0 and g(sub.hi)_t <= 0 for every box dimension t.
SignOracle box_restriction(const SignOracle& o, const Box& sub,
                           bool check_certificates = debug_checks_default());

/// g_j over the first `a` coordinates with suffix `q` fixed: the first a signs
/// of g(x, q) followed by sign j (1-based, a+1 <= j <= outputs).
SignOracle project_last(const SignOracle& g, const Point& q, std::size_t a, std::size_t j);

/// Last sign {0,+1} -> +1, -1 -> -1.
SignOracle collapse_last_up(const SignOracle& o);
/// Last sign {0,-1} -> -1, +1 -> +1.
SignOracle collapse_last_down(const SignOracle& o);

/// Raw sign table of an explicit sign instance, row-major over `box`.
SignOracle sign_table_oracle(const Box& box, std::vector<SignVector> table, std::string label = "g");

struct ValidationReport {
  enum class Kind { Ok, Range, Monotone, SelfMap };
  Kind kind = Kind::Ok;
  Point x;
  Point y;
  std::size_t output = 0;
  std::uint64_t points_checked = 0;
  std::string message;

  bool ok() const { return kind == Kind::Ok; }
};

struct ValidateOptions {
  enum class Mode { Exhaustive, Sampled };
  Mode mode = Mode::Exhaustive;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::uint64_t volume_cap = 1'000'000;
  bool parallel = true;

  static ValidateOptions exhaustive() { return {}; }
  static ValidateOptions sampled(std::uint64_t count, std::uint64_t seed) {
    ValidateOptions o;
    o.mode = Mode::Sampled;
    o.samples = count;
    o.seed = seed;
    return o;
  }
};

/// Checks the range and monotone conditions with fresh (uncounted) evaluations.
ValidationReport validate(const SignOracle& o, const ValidateOptions& opts = {});
/// Checks that f is a monotone self-map of its box.
ValidationReport validate(const FnOracle& f, const ValidateOptions& opts = {});

}  // namespace tarski

#endif  // TARSKI_SIGN_ORACLE_HPP
