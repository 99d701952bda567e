#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "tarski/bench.hpp"
#include "tarski/instances.hpp"

using namespace tarski;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("tarski_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

RunResult run_cli(const std::string& args) {
  const char* cli = std::getenv("TARSKI_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "TARSKI_CLI is not set");
  const fs::path log = scratch_dir() / "out.txt";
  const std::string cmd = std::string("\"") + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write_doc(const std::string& name, const std::string& body) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string strip_wall_time(const std::string& csv) {
  // wall_time_ns is the 11th column.
  std::stringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() == 12) cols[10] = "-";
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("parse_n_grid") {
  CHECK(bench::parse_n_grid("16..128") == std::vector<Coord>{16, 32, 64, 128});
  CHECK(bench::parse_n_grid("2..100x3") == std::vector<Coord>{2, 6, 18, 54});
  CHECK(bench::parse_n_grid("5,7,9") == std::vector<Coord>{5, 7, 9});
  CHECK(bench::parse_n_grid("8") == std::vector<Coord>{8});
  CHECK_THROWS_AS(bench::parse_n_grid("8..4"), UsageError);
  CHECK_THROWS_AS(bench::parse_n_grid("a..4"), UsageError);
  CHECK_THROWS_AS(bench::parse_n_grid("4..8x1"), UsageError);
  CHECK_THROWS_AS(bench::parse_n_grid("0"), UsageError);
}

TEST_CASE("parse_algos") {
  const auto a = bench::parse_algos("new,dqy,new-staircase", Base2d::Fps);
  REQUIRE(a.size() == 3);
  CHECK(a[0].label() == "new-fps");
  CHECK(a[1].label() == "dqy");
  CHECK(a[2].label() == "new-staircase");
  CHECK(bench::parse_algos("new", Base2d::Staircase)[0].label() == "new-staircase");
  CHECK_THROWS_AS(bench::parse_algos("fast", Base2d::Fps), UsageError);
}

TEST_CASE("coupled_point has the unique fixed point p") {
  const Box box = Box::cube(3, 4);
  for (const Point& p : enumerate_box(box)) {
    const FnOracle f = bench::gen_coupled_point(box, p);
    REQUIRE(validate(f).ok());
    std::uint64_t fixed = 0;
    for (const Point& x : enumerate_box(box)) {
      if (f.evaluate(x) == x) {
        ++fixed;
        REQUIRE(x == p);
      }
    }
    REQUIRE(fixed == 1);
  }
}

TEST_CASE("csv layout, empty sweep and determinism") {
  std::ostringstream h;
  bench::write_csv_header(h);
  CHECK(h.str() ==
        "instance_id,family,sides,k,algorithm,base2d_config,distinct_queries,total_queries,rounds,"
        "valid,wall_time_ns,seed\n");

  bench::SweepConfig cfg;
  cfg.family = "random_steps";
  cfg.k = 3;
  cfg.n_grid = {8, 32};
  cfg.reps = 0;
  cfg.algos = bench::parse_algos("new,dqy", Base2d::Fps);
  std::ostringstream empty;
  bench::write_csv(empty, bench::run_sweep(cfg));
  CHECK(empty.str() == h.str());

  cfg.reps = 3;
  const auto a = bench::run_sweep(cfg);
  cfg.parallel = false;
  const auto b = bench::run_sweep(cfg);
  REQUIRE(a.size() == 12);
  std::ostringstream ca;
  std::ostringstream cb;
  bench::write_csv(ca, a);
  bench::write_csv(cb, b);
  CHECK(strip_wall_time(ca.str()) == strip_wall_time(cb.str()));
  for (const auto& r : a) CHECK(r.valid);
  CHECK(a[0].instance_id == "random_steps-k3-n8-r0");
  CHECK(a[0].sides == "8x8x8");
  CHECK(a[0].base2d_config == "fps");
  CHECK(a[1].base2d_config == "-");
}

TEST_CASE("summary ratios and flagged exponent") {
  CHECK(bench::non_increasing_within({3.0, 3.2, 2.9}, 0.10));
  CHECK_FALSE(bench::non_increasing_within({3.0, 3.4}, 0.10));
  CHECK_FALSE(bench::non_increasing_within({3.0, 3.25, 3.55}, 0.10));

  std::vector<bench::BenchRecord> recs;
  for (Coord n : {4, 16, 256, 65536}) {
    bench::BenchRecord r;
    r.algorithm = "dqy";
    r.sides = std::to_string(n) + "x" + std::to_string(n);
    const auto lg = static_cast<std::uint64_t>(std::log2(n));
    r.distinct_queries = lg * lg;  // exactly (log2 n)^2
    recs.push_back(r);
  }
  const auto s = bench::summarize(recs);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows[3].ratio[2] == doctest::Approx(1.0));
  CHECK(s.flagged_exponent.at(0).second == 2);
}

TEST_CASE("cli solve") {
  const auto hp = write_doc("hp.json", R"({"kind":"hidden_point","sides":[3,3,3],"p":[2,2,2]})");
  for (const char* algo : {"new", "dqy", "brute"}) {
    const auto r = run_cli(std::string("solve --instance ") + hp + " --algo " + algo);
    CHECK(r.code == 0);
    CHECK(r.out.find("fixed point: (2,2,2)") != std::string::npos);
    CHECK(r.out.find("verified: yes") != std::string::npos);
  }
  const auto st = run_cli("solve --instance " + hp + " --algo new --base2d staircase");
  CHECK(st.code == 0);

  const auto bad = write_doc("bad.json", R"({"kind":"explicit_table","sides":[2],"values":[[2],[1]]})");
  const auto rb = run_cli("solve --instance " + bad);
  CHECK(rb.code != 0);
  CHECK(rb.out.find("monotonicity violated at") != std::string::npos);

  const auto sign = write_doc(
      "sign.json", R"({"kind":"explicit_sign_table","sides":[3],"values":[[1,-1],[0,0],[-1,1]]})");
  const auto rs = run_cli("solve --instance " + sign);
  CHECK(rs.code == 0);
  CHECK(rs.out.find("solution: (2)") != std::string::npos);

  CHECK(run_cli("solve --instance /nonexistent.json").code == 2);
  CHECK(run_cli("solve --instance " + hp + " --algo magic").code != 0);
}

TEST_CASE("cli enumerate") {
  for (const auto& [sides, count] : std::vector<std::pair<std::string, int>>{
           {"2", 3}, {"2,2", 36}, {"3", 10}}) {
    const fs::path dir = scratch_dir() / ("enum_" + sides);
    fs::remove_all(dir);
    const auto r = run_cli("enumerate --sides " + sides + " --out " + dir.string());
    CHECK(r.code == 0);
    std::ifstream index(dir / "index.txt");
    int lines = 0;
    std::string line;
    while (std::getline(index, line)) {
      ++lines;
      CHECK_NOTHROW(load_instance((dir / line).string()));
    }
    CHECK(lines == count);
  }
  CHECK(run_cli("enumerate --sides 3,3 --out " + (scratch_dir() / "capped").string() + " --cap 100")
            .code != 0);
}

TEST_CASE("cli bench and verify") {
  const fs::path csv = scratch_dir() / "b.csv";
  const auto r = run_cli("bench --family hidden_point --k 3 --n-grid 8..32 --reps 2 --algos new,dqy --out " +
                         csv.string());
  CHECK(r.code == 0);
  std::ifstream in(csv);
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 3 * 2 * 2);
  CHECK(r.out.find("max/lg^2") != std::string::npos);

  const fs::path empty = scratch_dir() / "e.csv";
  CHECK(run_cli("bench --reps 0 --out " + empty.string()).code == 0);
  std::ifstream ein(empty);
  std::stringstream ss;
  ss << ein.rdbuf();
  std::ostringstream h;
  bench::write_csv_header(h);
  CHECK(ss.str() == h.str());

  const auto v = run_cli("verify --suite refined --cap 50");
  CHECK(v.code == 0);
  CHECK(v.out.find("refined") != std::string::npos);
  CHECK(run_cli("verify --suite nope").code == 2);
}
