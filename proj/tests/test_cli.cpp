#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "renewal/config.hpp"
#include "renewal/errors.hpp"

namespace fs = std::filesystem;
using renewal::Config;

namespace {

std::string cli_path() {
  const char* p = std::getenv("RENEWAL_CLI");
  REQUIRE_MESSAGE(p != nullptr, "RENEWAL_CLI must point at the binary");
  return p;
}

fs::path tmp_dir() {
  fs::path d = fs::temp_directory_path() / "renewal_cli_tests";
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

const char* kSrwConfig =
    "dist.family=lattice_pmf\n"
    "dist.d=1\n"
    "dist.atom.-1=0.3\n"
    "dist.atom.1=0.7\n";

const char* kTseConfig =
    "dist.family=two_sided_exponential\n"
    "dist.p=0.6\n"
    "dist.lambda=1\n"
    "dist.mu=2\n";

}  // namespace

TEST_CASE("config round-trips through serialize/parse") {
  Config c = Config::parse_string(
      "# comment line\n"
      "dist.family=lattice_pmf\n"
      "dist.atom.-1=0.3   # trailing comment\n"
      "mc.seed=42\n");
  CHECK(c.get("dist.atom.-1") == "0.3");
  CHECK(c.get_int("mc.seed") == 42);
  Config c2 = Config::parse_string(c.serialize());
  CHECK(c2.entries() == c.entries());
  CHECK(c2.serialize() == c.serialize());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(Config::parse_string("novalue\n"), renewal::ConfigError);
  Config c = Config::parse_string("a=1\n");
  CHECK_THROWS_AS(c.get("missing"), renewal::ConfigError);
  CHECK(c.get_real("a") == 1.0);
  CHECK_THROWS_AS((void)c.get_int("b"), renewal::ConfigError);
  Config bad = Config::parse_string("x=notanumber\n");
  CHECK_THROWS_AS((void)bad.get_real("x"), renewal::ConfigError);
}

TEST_CASE("tilt subcommand emits the closed-form parameters") {
  auto dir = tmp_dir();
  write_file(dir / "tse.cfg", kTseConfig);
  auto out = dir / "tilt.csv";
  REQUIRE(run_cli("tilt --config " + (dir / "tse.cfg").string() + " --out " +
                  out.string()) == 0);
  auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "kappa");
  CHECK(std::stod(rows[1][0]) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0));
  CHECK(std::stod(rows[1][2]) ==
        doctest::Approx(10.0 / 27.0).epsilon(1e-10));
  CHECK(rows[1][4] == "none");
}

TEST_CASE("compare on the arithmetic walk: ratio identically one") {
  auto dir = tmp_dir();
  write_file(dir / "srw.cfg", std::string(kSrwConfig) +
                                  "grid.x_min=0\ngrid.x_max=40\n"
                                  "grid.x_step=1\noracle.tol=1e-10\n");
  auto out = dir / "srw_compare.csv";
  REQUIRE(run_cli("compare --config " + (dir / "srw.cfg").string() +
                  " --out " + out.string()) == 0);
  auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 42);
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][6]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rows[i][8] == "(a-ii)");
  }
}

TEST_CASE("malformed config exits 2 and writes no output") {
  auto dir = tmp_dir();
  write_file(dir / "bad.cfg",
             "dist.family=lattice_pmf\n"
             "dist.atom.-1=-0.3\n"
             "dist.atom.1=1.3\n");
  auto out = dir / "bad.csv";
  fs::remove(out);
  CHECK(run_cli("compare --config " + (dir / "bad.cfg").string() + " --out " +
                out.string()) == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("missing seed for an MC command exits 2") {
  auto dir = tmp_dir();
  write_file(dir / "tse_noseed.cfg",
             std::string(kTseConfig) + "grid.x=0,5,10\n");
  CHECK(run_cli("simulate --config " + (dir / "tse_noseed.cfg").string()) ==
        2);
}

TEST_CASE("unknown subcommand exits 2") {
  auto dir = tmp_dir();
  write_file(dir / "tse.cfg", kTseConfig);
  CHECK(run_cli("frobnicate --config " + (dir / "tse.cfg").string()) == 2);
}

TEST_CASE("ambiguous boundary regime exits 4 from predict") {
  auto dir = tmp_dir();
  write_file(dir / "cal.cfg",
             "dist.family=poly_geom_lattice\n"
             "dist.d=1\ndist.C=0.3008849822119337\ndist.beta=1.75\n"
             "dist.a=2\ndist.right_k=1\n"
             "grid.x=200\nsrt.alpha=0.75\n");
  CHECK(run_cli("predict --config " + (dir / "cal.cfg").string()) == 4);
}

TEST_CASE("simulate naive demonstrates the rare-event failure") {
  auto dir = tmp_dir();
  write_file(dir / "srw_mc.cfg",
             std::string(kSrwConfig) +
                 "grid.x=20\nmc.method=naive\nmc.paths=1000000\n"
                 "mc.horizon=1000\nmc.seed=12\n");
  auto out = dir / "naive.csv";
  REQUIRE(run_cli("simulate --config " + (dir / "srw_mc.cfg").string() +
                  " --out " + out.string()) == 0);
  auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(rows[1][4] == "NAIVE");
}

TEST_CASE("compare is byte-identical across worker counts") {
  auto dir = tmp_dir();
  write_file(dir / "tse_cmp.cfg",
             std::string(kTseConfig) +
                 "grid.x=0,5,10\nmc.paths=40000\nmc.seed=4242\n");
  std::string base = "compare --config " + (dir / "tse_cmp.cfg").string();
  auto o1 = dir / "w1.csv", o4 = dir / "w4.csv", o8 = dir / "w8.csv";
  REQUIRE(run_cli(base + " --workers 1 --out " + o1.string()) == 0);
  REQUIRE(run_cli(base + " --workers 4 --out " + o4.string()) == 0);
  REQUIRE(run_cli(base + " --workers 8 --out " + o8.string()) == 0);
  std::string a = read_file(o1);
  CHECK(a == read_file(o4));
  CHECK(a == read_file(o8));
  CHECK(!a.empty());
}

TEST_CASE("oracle subcommand: p-side and q-side agree") {
  auto dir = tmp_dir();
  write_file(dir / "srw_p.cfg", std::string(kSrwConfig) +
                                    "grid.x=0,10,20\noracle.side=p\n");
  write_file(dir / "srw_q.cfg", std::string(kSrwConfig) +
                                    "grid.x=0,10,20\noracle.side=q\n");
  auto op = dir / "p.csv", oq = dir / "q.csv";
  REQUIRE(run_cli("oracle --config " + (dir / "srw_p.cfg").string() +
                  " --out " + op.string()) == 0);
  REQUIRE(run_cli("oracle --config " + (dir / "srw_q.cfg").string() +
                  " --out " + oq.string()) == 0);
  auto rp = parse_csv(read_file(op)), rq = parse_csv(read_file(oq));
  REQUIRE(rp.size() == rq.size());
  for (size_t i = 1; i < rp.size(); ++i) {
    CHECK(std::stod(rp[i][1]) ==
          doctest::Approx(std::stod(rq[i][1])).epsilon(1e-7));
    CHECK(std::stod(rp[i][1]) == doctest::Approx(1.875).epsilon(1e-8));
  }
}

TEST_CASE("calibrate subcommand recovers the frozen coefficient") {
  auto dir = tmp_dir();
  write_file(dir / "cal.cfg",
             "dist.family=poly_geom_lattice\n"
             "dist.d=1\ndist.C=0.1\ndist.beta=1.75\ndist.a=2\n"
             "dist.right_k=1\n"
             "calib.theta_star=0.6931471805599453\ncalib.target=1\n");
  auto out = dir / "cal.csv";
  REQUIRE(run_cli("calibrate --config " + (dir / "cal.cfg").string() +
                  " --out " + out.string()) == 0);
  auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][0]) ==
        doctest::Approx(0.3008849822119337).epsilon(1e-9));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("srtc subcommand emits the diagnostic grid") {
  auto dir = tmp_dir();
  write_file(dir / "srtc.cfg",
             std::string(kSrwConfig) + "srtc.delta=0.2,0.5\nsrtc.x=30,60\n");
  auto out = dir / "srtc.csv";
  REQUIRE(run_cli("srtc --config " + (dir / "srtc.cfg").string() + " --out " +
                  out.string()) == 0);
  auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0][0] == "delta");
}
