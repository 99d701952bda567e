// tarski: solve, bench, verify and enumerate subcommands.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tarski/bench.hpp"
#include "tarski/errors.hpp"
#include "tarski/instances.hpp"
#include "tarski/star_solvers.hpp"
#include "tarski/tarski_outer.hpp"
#include "tarski/verify.hpp"

namespace {

using namespace tarski;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void print_stats(const QueryStats& st) {
  std::cout << "distinct_queries: " << st.distinct_queries << "\n"
            << "total_queries: " << st.total_queries << "\n";
  if (st.debug_queries > 0) std::cout << "debug_queries: " << st.debug_queries << "\n";
}

int cmd_solve(const std::string& path, const std::string& algo, const std::string& base2d) {
  const InstanceSpec spec = load_instance(path);
  SolverConfig cfg;
  cfg.base2d = parse_base2d(base2d);

  if (spec.is_sign_instance()) {
    const SignOracle g = instantiate_sign(spec);
    std::optional<StarSolution> sol;
    if (algo == "new") {
      sol = solve_star(g, cfg);
    } else if (algo == "brute") {
      for (const Point& x : enumerate_box(g.box())) {
        const SignVector s = g.query(x);
        if (s.uniform()) {
          sol = make_solution(x, s);
          break;
        }
      }
      if (!sol) throw InstanceInvalid("no uniformly signed point");
    } else {
      throw UsageError("algorithm " + algo + " does not apply to sign instances");
    }
    const bool ok = sol->signs == g.evaluate(sol->point) && sol->signs.uniform();
    std::cout << "solution: " << sol->point.str() << "\n"
              << "signs: " << sol->signs.str() << "\n";
    print_stats(g.stats());
    std::cout << "verified: " << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : kExitFail;
  }

  const FnOracle f = instantiate(spec);
  const auto opts = f.box().volume() <= 1'000'000 ? ValidateOptions::exhaustive()
                                                  : ValidateOptions::sampled(100'000, 1);
  const ValidationReport rep = validate(f, opts);
  if (!rep.ok()) {
    std::cerr << "invalid instance: " << rep.message << "\n";
    return kExitUsage;
  }
  TarskiResult res;
  if (algo == "new") {
    res = solve_tarski(f, cfg);
  } else if (algo == "dqy") {
    res = solve_tarski_dqy(f);
  } else if (algo == "brute") {
    res = solve_tarski_brute(f);
  } else {
    throw UsageError("unknown algorithm: " + algo);
  }
  std::cout << "fixed point: " << res.point.str() << "\n"
            << "rounds: " << res.rounds << "\n";
  print_stats(res.stats);
  std::cout << "verified: " << (res.verified ? "yes" : "no") << "\n";
  return res.verified ? 0 : kExitFail;
}

int cmd_bench(const bench::SweepConfig& cfg, const std::string& out) {
  const auto records = bench::run_sweep(cfg);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + out);
  bench::write_csv(file, records);
  std::size_t invalid = 0;
  for (const auto& r : records) {
    if (!r.valid) {
      if (invalid++ == 0) std::cerr << "invalid record: " << r.instance_id << " " << r.algorithm << "\n";
    }
  }
  if (!records.empty()) bench::write_summary(std::cout, bench::summarize(records));
  std::cout << records.size() << " records written to " << out << "\n";
  return invalid == 0 ? 0 : kExitFail;
}

int cmd_verify(const std::string& suite, const verify::VerifyOptions& opts) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = verify::suite_names();
  } else {
    suites.push_back(suite);
  }
  bool ok = true;
  for (const auto& s : suites) {
    const auto rep = verify::run_suite(s, opts);
    verify::write_report(std::cout, rep);
    ok = ok && rep.ok();
  }
  return ok ? 0 : kExitFail;
}

int cmd_enumerate(const std::vector<Coord>& sides, const std::string& dir, std::uint64_t cap) {
  const Box box = Box::from_sides(sides);
  const auto maps = enumerate_monotone_maps(box, cap);
  std::filesystem::create_directories(dir);
  std::ofstream index(std::filesystem::path(dir) / "index.txt", std::ios::binary);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    std::ostringstream name;
    name << "map_" << std::setw(6) << std::setfill('0') << i << ".json";
    InstanceSpec spec;
    spec.kind = InstanceKind::ExplicitTable;
    spec.sides = sides;
    spec.values = maps[i];
    save_instance(spec, (std::filesystem::path(dir) / name.str()).string());
    index << name.str() << "\n";
  }
  std::cout << maps.size() << " instances written to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tarski fixed points on integer grids"};
  app.require_subcommand(1);

  std::string instance;
  std::string algo = "new";
  std::string base2d = "fps";
  auto* solve = app.add_subcommand("solve", "Solve one instance document");
  solve->add_option("--instance", instance, "Instance JSON")->required();
  solve->add_option("--algo", algo, "new | dqy | brute")
      ->check(CLI::IsMember({"new", "dqy", "brute"}));
  solve->add_option("--base2d", base2d, "fps | staircase")
      ->check(CLI::IsMember({"fps", "staircase"}));

  bench::SweepConfig sweep;
  std::string grid = "16..1024";
  std::string algos = "new,dqy";
  std::string bench_base = "fps";
  std::string out = "bench.csv";
  auto* bench_cmd = app.add_subcommand("bench", "Query-count sweep to CSV");
  bench_cmd->add_option("--family", sweep.family, "Instance family")
      ->check(CLI::IsMember(bench::families()));
  bench_cmd->add_option("--k", sweep.k, "Dimension")->check(CLI::Range(1, 16));
  bench_cmd->add_option("--n-grid", grid, "LO..HI, LO..HIxSTEP or a,b,c");
  bench_cmd->add_option("--reps", sweep.reps, "Repetitions per n");
  bench_cmd->add_option("--seed", sweep.seed, "Base seed");
  bench_cmd->add_option("--algos", algos, "Comma list of new, new-fps, new-staircase, dqy, brute");
  bench_cmd->add_option("--base2d", bench_base, "2-D base for plain 'new'")
      ->check(CLI::IsMember({"fps", "staircase"}));
  bench_cmd->add_option("--num-steps", sweep.num_steps, "Steps per coordinate for random_steps");
  bench_cmd->add_option("--out", out, "CSV output path");

  std::string suite = "all";
  verify::VerifyOptions vopts;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", suite, "Suite name or 'all'");
  verify_cmd->add_option("--seed", vopts.seed, "Seed");
  verify_cmd->add_option("--cap", vopts.cap, "Max instances per randomized part (0 = default)");

  std::vector<Coord> sides;
  std::string dir;
  std::uint64_t enum_cap = 100'000;
  auto* enum_cmd = app.add_subcommand("enumerate", "Write every monotone map of a box");
  enum_cmd->add_option("--sides", sides, "Side lengths")->delimiter(',')->required();
  enum_cmd->add_option("--out", dir, "Output directory")->required();
  enum_cmd->add_option("--cap", enum_cap, "Maximum number of maps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(instance, algo, base2d);
    if (bench_cmd->parsed()) {
      sweep.n_grid = bench::parse_n_grid(grid);
      sweep.algos = bench::parse_algos(algos, parse_base2d(bench_base));
      sweep.debug_checks = debug_checks_default();
      return cmd_bench(sweep, out);
    }
    if (verify_cmd->parsed()) return cmd_verify(suite, vopts);
    if (enum_cmd->parsed()) return cmd_enumerate(sides, dir, enum_cap);
  } catch (const LoadError& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
