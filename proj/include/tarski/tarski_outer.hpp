#ifndef TARSKI_TARSKI_OUTER_HPP
#define TARSKI_TARSKI_OUTER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tarski/lattice.hpp"
#include "tarski/sign_oracle.hpp"
#include "tarski/star_solvers.hpp"

namespace tarski {

struct TarskiResult {
  Point point;
  std::uint64_t rounds = 0;
  QueryStats stats;
  /// f(point) == point by one fresh evaluation.
  bool verified = false;
};

/// Reduction to Tarski*: bisect the widest dimension of [l, r] with a slice
/// solved by solve_star until every side is at most 3, then sweep.
TarskiResult solve_tarski(const FnOracle& f, const SolverConfig& cfg = {});

/// First fixed point of `box` in row-major order, using counted queries.
std::optional<Point> brute_force_fixed_point(const FnOracle& f, const Box& box,
                                             std::uint64_t cap = 10'000'000);

/// Every fixed point in `box` (fresh evaluations). InstanceInvalid if none.
std::vector<Point> all_fixed_points(const FnOracle& f, const Box& box, bool parallel = true,
                                    std::uint64_t cap = 10'000'000);

/// Coordinate-wise recursive binary search baseline.
TarskiResult solve_tarski_dqy(const FnOracle& f);

/// Full-box brute force wrapped as a TarskiResult.
TarskiResult solve_tarski_brute(const FnOracle& f);

}  // namespace tarski

#endif  // TARSKI_TARSKI_OUTER_HPP
