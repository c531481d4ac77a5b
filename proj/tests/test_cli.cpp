#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "rcw_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RCW_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("CLI: grid CSV has one row per node and is reproducible") {
  const auto dir = scratch();
  REQUIRE(run("grid --radius 10 --samples 100000 --seed 7 --out " + (dir / "a.csv").string()) == 0);
  REQUIRE(run("grid --radius 10 --samples 100000 --seed 7 --workers 3 --out " + (dir / "b.csv").string()) == 0);
  const auto a = slurp(dir / "a.csv");
  CHECK(lines(a) == 222);
  CHECK(a == slurp(dir / "b.csv"));
}

TEST_CASE("CLI: exit codes") {
  const auto dir = scratch();
  {
    std::ofstream(dir / "geo.txt") << "type geometric\nrings 10\nper_ring 30\nbeta 180\nseed 1\n";
  }
  CHECK(run("rings --net " + (dir / "geo.txt").string() + " --samples 10 --out -") == 20);
  CHECK(run("rings --net " + (dir / "geo.txt").string() + " --samples 1000 --force --out " +
            (dir / "f.csv").string()) == 0);
  CHECK(run("rings --net /nonexistent --out -") == 25);
  CHECK(run("grid") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("grid --radius 2 --dist pid --p0 1.5 --out -") == 11);
}

TEST_CASE("CLI: oracle, tree and experiment") {
  const auto dir = scratch();
  {
    std::ofstream(dir / "tree.txt") << "type edge_list\nedges\n0 1\n1 2\nweights\n0 1\n1 2\n2 3\n";
    std::ofstream(dir / "rings.txt") << "type uniform_rings\nsizes 1 4 4\ndelta 4 1\ngamma 1 1\n";
    std::ofstream(dir / "exp.json") << R"({"schema": "rcw-experiment/1", "sampler": "grid",
      "network": {"type": "grid", "radius": 2}, "dist": "uni", "samples": 1000, "seed": 1,
      "outputs": {"csv": "exp.csv"}})";
  }
  REQUIRE(run("oracle --net " + (dir / "rings.txt").string() + " --sampler rings-d1 --out " +
              (dir / "o.csv").string()) == 0);
  const auto o = slurp(dir / "o.csv");
  CHECK(o.rfind("node,ring,expected_p,oracle_p\n", 0) == 0);
  CHECK(lines(o) == 10);

  REQUIRE(run("tree --net " + (dir / "tree.txt").string() + " --exclude-source --samples 500 --out " +
              (dir / "t.csv").string() + " --summary " + (dir / "t.json").string()) == 0);
  CHECK(lines(slurp(dir / "t.csv")) == 4);
  CHECK(slurp(dir / "t.json").find("\"chi2\"") != std::string::npos);

  REQUIRE(run("experiment " + (dir / "exp.json").string() + " > " + (dir / "exp.out").string()) == 0);
  CHECK(lines(slurp(dir / "exp.csv")) == 14);
}
