#include <doctest.h>

#include "tarski/instances.hpp"
#include "tarski/kernels.hpp"
#include "tarski/rng.hpp"

using namespace tarski;

namespace {

// Naive full scan over all comparable pairs; reference for ok/not-ok only.
bool monotone_by_pairs(const Box& box, const std::vector<Point>& t) {
  const auto pts = enumerate_box(box);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (leq(pts[a], pts[b]) && !leq(t[a], t[b])) return false;
    }
  }
  return true;
}

std::vector<Point> perturbed_table(const Box& box, std::uint64_t seed) {
  const FnOracle f = gen_random_steps(box, seed, 6);
  std::vector<Point> t = kernels::tabulate(f, false);
  Xorshift64Star rng(seed);
  const auto i = rng.below(t.size());
  const auto c = rng.below(box.dim());
  t[i][c] = rng.uniform(box.lo()[c], box.hi()[c]);
  return t;
}

}  // namespace

TEST_CASE("tabulate matches point-by-point evaluation in both modes") {
  const Box box = Box::cube(3, 5);
  const FnOracle f = gen_random_steps(box, 9, 8);
  const auto ser = kernels::tabulate(f, false);
  const auto par = kernels::tabulate(f, true);
  CHECK(ser == par);
  for (std::uint64_t i = 0; i < box.volume(); ++i) CHECK(ser[i] == f.evaluate(box.point_at(i)));
  CHECK(f.stats().total_queries == 0);
}

TEST_CASE("serial and parallel checks agree and find the smallest index") {
  const Box box = Box::cube(3, 4);
  int bad = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto t = perturbed_table(box, seed);
    const ValidationReport s = kernels::check_fn_table(box, t, false);
    const ValidationReport p = kernels::check_fn_table(box, t, true);
    REQUIRE(s.kind == p.kind);
    REQUIRE(s.x == p.x);
    REQUIRE(s.y == p.y);
    REQUIRE(s.message == p.message);
    CHECK(s.ok() == monotone_by_pairs(box, t));
    if (!s.ok()) {
      ++bad;
      // No neighbour violation at any earlier index.
      const auto first = box.index_of(s.x);
      for (std::uint64_t i = 0; i < first; ++i) {
        const Point x = box.point_at(i);
        for (std::size_t d = 0; d < 3; ++d) {
          if (x[d] == box.hi()[d]) continue;
          Point y = x;
          ++y[d];
          REQUIRE(leq(t[i], t[box.index_of(y)]));
        }
      }
    }
  }
  CHECK(bad > 50);
}

TEST_CASE("self-map violations come first in the message") {
  const Box box = Box::cube(1, 3);
  const auto r = kernels::check_fn_table(box, {Point{1}, Point{4}, Point{3}}, true);
  CHECK(r.kind == ValidationReport::Kind::SelfMap);
  CHECK(r.x == Point{2});
  CHECK(r.message.find("leaves the box") != std::string::npos);
}

TEST_CASE("sign-table check: range before monotone, messages") {
  const Box box = Box::cube(1, 3);
  const std::vector<SignVector> t{SignVector{1, 0}, SignVector{1, 0}, SignVector{1, 0}};
  const auto r = kernels::check_sign_table(box, t, true);
  CHECK(r.kind == ValidationReport::Kind::Range);
  CHECK(r.x == Point{3});
  CHECK(r.message.find("range violated at") != std::string::npos);

  const std::vector<SignVector> m{SignVector{1, 1}, SignVector{0, -1}, SignVector{-1, -1}};
  const auto r2 = kernels::check_sign_table(box, m, false);
  CHECK(r2.kind == ValidationReport::Kind::Monotone);
  CHECK(r2.message.find("monotonicity violated at") != std::string::npos);
  CHECK(kernels::check_sign_table(box, m, true).message == r2.message);
}

TEST_CASE("fixed points and star solutions") {
  const Box box = Box::cube(2, 4);
  const FnOracle id(box, [](const Point& x) { return x; });
  const auto t = kernels::tabulate(id, true);
  CHECK(kernels::fixed_point_indices(box, t, true).size() == 16);
  CHECK(kernels::fixed_point_indices(box, t, false) == kernels::fixed_point_indices(box, t, true));

  const FnOracle hp = gen_hidden_point(box, Point{3, 2});
  const auto th = kernels::tabulate(hp, false);
  CHECK(kernels::fixed_point_indices(box, th, true) == std::vector<std::uint64_t>{box.index_of(Point{3, 2})});

  const std::vector<SignVector> s{SignVector{1, -1}, SignVector{0, 0}, SignVector{1, 1},
                                  SignVector{-1, 0}};
  CHECK(kernels::star_solution_indices(s, false) == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(kernels::star_solution_indices(s, true) == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("every valid sign table on [2]^2 passes both modes") {
  std::uint64_t seen = 0;
  for_each_valid_sign_table(Box::cube(2, 2), [&](const std::vector<SignVector>& t) {
    ++seen;
    REQUIRE(kernels::check_sign_table(Box::cube(2, 2), t, false).ok());
    REQUIRE(kernels::check_sign_table(Box::cube(2, 2), t, true).ok());
    REQUIRE_FALSE(kernels::star_solution_indices(t, false).empty());
  });
  CHECK(seen == 720);
}
