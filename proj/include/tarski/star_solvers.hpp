#ifndef TARSKI_STAR_SOLVERS_HPP
#define TARSKI_STAR_SOLVERS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tarski/lattice.hpp"
#include "tarski/sign_oracle.hpp"

namespace tarski {

enum class Polarity { Nonneg, Nonpos };

/// A point whose signs are uniformly >= 0 or uniformly <= 0. All-zero
/// vectors are reported as Nonpos.
struct StarSolution {
  Point point;
  SignVector signs;
  Polarity polarity = Polarity::Nonpos;
};

struct RefinedWitness {
  Point p_left;
  Point p_right;
  int which_case = 0;  // 1, 2 or 3
  int solver_calls = 0;
};

struct LedgerRound {
  Point q;
  SignVector r;
  Point p_left;
  Point p_right;
};

struct DecompositionLedger {
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<LedgerRound> rounds;
};

enum class Base2d { Fps, Staircase };

std::string base2d_name(Base2d b);
Base2d parse_base2d(const std::string& name);

/// Runtime invariant violations, keyed by check:
///  a  ledger consistency between comparable rounds
///  b  witness signs on the first a coordinates and p_left <= p_right
///  c  corner equality on the last b+1 signs
///  d  outer loop invariant l <= f(l), f(r) <= r
///  e  refined calls per round != b+1
struct Violation {
  char check = '?';
  std::string detail;
};

/// Optional instrumentation filled by the solvers.
struct SolverTrace {
  std::uint64_t star_calls = 0;
  std::uint64_t refined_calls = 0;
  std::uint64_t decompositions = 0;
  std::uint64_t rounds = 0;
  std::uint64_t max_refined_solver_calls = 0;
  std::vector<Violation> violations;
  /// Ledger of the most recent top-level decomposition.
  DecompositionLedger last_ledger;

  std::uint64_t count(char check) const;
};

struct SolverConfig {
  Base2d base2d = Base2d::Fps;
  bool debug_checks = debug_checks_default();
  bool warm_start = true;
  /// Throw on a detected violation; otherwise only record it in the trace.
  bool throw_on_violation = true;
  SolverTrace* trace = nullptr;
};

using StarSolver = std::function<StarSolution(const SignOracle&)>;

/// Builds a solution from a queried sign vector; throws if it is mixed.
StarSolution make_solution(const Point& x, const SignVector& s);

StarSolution solve_star_1d(const SignOracle& o);

/// Column c in [c_lo, c_hi] with g((c, y))_1 = 0, by bisection on sign 1.
Coord bracketed_zero_in_row(const SignOracle& o, Coord y, Coord c_lo, Coord c_hi);

StarSolution solve_star_2d_staircase(const SignOracle& o);

/// Bisection on a rectangle whose edges carry sign guarantees:
/// left g1=-1 => g3<=0, right g1=+1 => g3>=0, bottom g2=-1 => g3<=0,
/// top g2=+1 => g3>=0. Each non-solution midpoint allows at least one
/// half-cut that keeps these guarantees, so the query count is
/// log2 W + log2 H + O(1).
StarSolution solve_star_2d_fps(const SignOracle& o);

RefinedWitness solve_refined_star(const SignOracle& o, const StarSolver& A,
                                  const SolverConfig& cfg = {});

/// Solves Tarski* on an (a+b)-dim oracle: B runs on the b-dim suffix box
/// against a virtual oracle answered by RefinedTarski* calls with A. B is
/// cut off at its first uniform answer; SolverContractError if it returns
/// without ever getting one.
StarSolution decompose_star(const SignOracle& o, std::size_t a, std::size_t b, const StarSolver& A,
                            const StarSolver& B, const SolverConfig& cfg = {});

/// k=1: 1-D, k=2: 2-D base, k>=3: decomposition with a=k-2, b=2.
StarSolution solve_star(const SignOracle& o, const SolverConfig& cfg = {});

}  // namespace tarski

#endif  // TARSKI_STAR_SOLVERS_HPP
