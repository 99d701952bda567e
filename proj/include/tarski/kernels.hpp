#ifndef TARSKI_KERNELS_HPP
#define TARSKI_KERNELS_HPP

// Data-parallel scanning kernels over whole boxes. Every kernel has an
// OpenMP path and a serial reference path selected by `parallel`; both
// return identical results (the first violation is the one with the
// smallest row-major index).

#include <cstdint>
#include <vector>

#include "tarski/lattice.hpp"
#include "tarski/sign_oracle.hpp"

namespace tarski::kernels {

/// Fresh evaluations of every point, row-major.
std::vector<SignVector> tabulate(const SignOracle& o, bool parallel);
std::vector<Point> tabulate(const FnOracle& f, bool parallel);

/// Range + neighbour-monotone check of a tabulated sign function.
ValidationReport check_sign_table(const Box& box, const std::vector<SignVector>& table,
                                  bool parallel);
/// Self-map + neighbour-monotone check of a tabulated map.
ValidationReport check_fn_table(const Box& box, const std::vector<Point>& table, bool parallel);

/// Row-major indices i with table[i] == point_at(i).
std::vector<std::uint64_t> fixed_point_indices(const Box& box, const std::vector<Point>& table,
                                               bool parallel);

/// Row-major indices whose sign vector is uniformly signed.
std::vector<std::uint64_t> star_solution_indices(const std::vector<SignVector>& table,
                                                 bool parallel);

/// Number of worker threads OpenMP would use (1 without OpenMP).
int max_threads();

}  // namespace tarski::kernels

#endif  // TARSKI_KERNELS_HPP
