#ifndef TARSKI_VERIFY_HPP
#define TARSKI_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarski/sign_oracle.hpp"
#include "tarski/star_solvers.hpp"

namespace tarski::verify {

/// Frozen 2-D budget constant: solve_star_2d_fps must use at most
/// kFpsC2 * (log2 n + 1) distinct queries. Measured maximum was 2.2.
inline constexpr double kFpsC2 = 2.5;
/// Allowed spread of max-queries / log2 n around its mean over the top half
/// of the 2-D grid.
inline constexpr double kFpsFlatnessTol = 0.20;

struct SuiteReport {
  std::string suite;
  std::uint64_t instances = 0;
  std::uint64_t assertions = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const { return failures == 0; }
  void check(bool cond, const std::string& what);
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Upper bound on instances per randomized part (0: suite default).
  std::uint64_t cap = 0;
  bool parallel = true;
};

SuiteReport exhaustive_small(const VerifyOptions& opts);
SuiteReport random_correctness(const VerifyOptions& opts);
SuiteReport invariants(const VerifyOptions& opts);
SuiteReport differential_2d(const VerifyOptions& opts);
SuiteReport budgets(const VerifyOptions& opts);
SuiteReport refined(const VerifyOptions& opts);

const std::vector<std::string>& suite_names();
/// Throws UsageError on an unknown suite.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opts);
void write_report(std::ostream& os, const SuiteReport& r);

/// RefinedWitness conditions, checked with fresh evaluations. Empty string
/// when they hold, otherwise a description of the first failure.
std::string witness_problem(const SignOracle& o, const RefinedWitness& w);

/// StarSolution conditions against a fresh evaluation.
std::string solution_problem(const SignOracle& o, const StarSolution& s);

}  // namespace tarski::verify

#endif  // TARSKI_VERIFY_HPP
