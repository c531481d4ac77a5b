#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rcw/experiment.hpp"
#include "test_util.hpp"

using namespace rcw;

namespace {

Topology parse(const std::string& text) {
  std::istringstream in(text);
  return parse_network(in);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "rcw_unit_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("network text format") {
  const auto grid = parse("# a grid\ntype grid\nradius 3\n");
  CHECK(std::get<RingNetwork>(grid).node_count() == 25);

  const auto rings = parse("type uniform_rings\nsizes 1 4 4\ndelta 4 1\ngamma 1 1\n");
  CHECK(std::get<RingNetwork>(rings).ring_sizes() == std::vector<std::size_t>{1, 4, 4});
  const auto d2 = parse("type uniform_rings\nsizes 1 4 4 4\ndelta 4 1 1\ngamma 1 1 1\ndistance2 true\n");
  CHECK(std::get<RingNetwork>(d2).has_distance2());

  const auto geo = parse("type geometric\nrings 4\nper_ring 6\nbeta 360\nseed 2\n");
  CHECK(std::get<RingNetwork>(geo).node_count() == 25);

  const auto g = std::get<Network>(parse("type edge_list\nedges\n0 1\n1 2 # tail\nweights\n2 4.5\n"));
  CHECK(g.size() == 3);
  CHECK(g.weight(0) == 1.0);
  CHECK(g.weight(2) == 4.5);
  CHECK(std::get<Network>(parse("type edge_list\nnodes 1\n")).size() == 1);

  CHECK(code_of([] { parse("radius 3\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("type grid\nradius x\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("type torus\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("type edge_list\nedges\n0 1 2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("type uniform_rings\nsizes 1 3 5\ndelta 3 2\ngamma 1 1\n"); }) ==
        ErrorCode::InconsistentDegrees);
  CHECK(code_of([] { load_network("/nonexistent/net.txt"); }) == ErrorCode::IoError);
}

TEST_CASE("distribution and policy files") {
  std::istringstream pid("kind pid\np0 0.25\n");
  const auto a = parse_distribution(pid);
  CHECK(a.kind == DistKind::Pid);
  CHECK(a.p0 == 0.25);

  std::istringstream ex("kind explicit\np 0.2\np 0.2\n");
  const auto b = parse_distribution(ex);
  CHECK(b.p == std::vector<double>{0.2, 0.2});
  const std::vector<std::size_t> sizes{1, 4};
  CHECK(resolve(b, sizes)[1] == 0.2);
  CHECK(code_of([&] { resolve(DistSpec{DistKind::Explicit, 0.0, {0.5, 0.5}}, sizes); }) ==
        ErrorCode::InvalidDistribution);

  CHECK(distribution_from_arg("uni").kind == DistKind::Uniform);
  CHECK(distribution_from_arg("pid", 0.1).p0 == 0.1);

  std::istringstream pol("s 0.5 0.75\n1\n");
  CHECK(parse_policy(pol).s == std::vector<double>{0.5, 0.75, 1.0});
}

TEST_CASE("run_sampler: rows, layouts and worker independence") {
  const auto topo = parse("type grid\nradius 4\n");
  RunOptions opt;
  opt.kind = SamplerKind::Grid;
  opt.samples = 50000;
  opt.seed = 3;
  const auto one = run_sampler(topo, {}, opt);
  opt.workers = 4;
  const auto four = run_sampler(topo, {}, opt);
  REQUIRE(one.rows.size() == 41);
  for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(one.rows[i].count == four.rows[i].count);
  CHECK(one.summary.max_hops <= 4);
  CHECK(one.summary.hop_bound == 4);

  std::ostringstream compact, full, oracle;
  write_csv(one, compact, CsvLayout::Compact);
  write_csv(one, full, CsvLayout::Full);
  write_csv(one, oracle, CsvLayout::Oracle);
  CHECK(compact.str().rfind("node,ring,expected_p,empirical_p,rel_error\n", 0) == 0);
  CHECK(full.str().rfind("node,ring,expected_p,count,empirical_p,rel_error\n", 0) == 0);
  CHECK(oracle.str().rfind("node,ring,expected_p,oracle_p\n", 0) == 0);

  const auto j = nlohmann::json::parse(summary_json(one));
  CHECK(j["samples"] == 50000);
  CHECK(j.contains("p_value"));

  opt.samples = 0;
  const auto only = run_sampler(topo, {}, opt);
  CHECK(only.rows.size() == 41);
  CHECK(only.summary.samples == 0);
}

TEST_CASE("run_sampler: tree kinds and errors") {
  const auto topo = parse("type edge_list\nedges\n0 1\n1 2\n2 3\n");
  RunOptions opt;
  opt.kind = SamplerKind::TreeExcl;
  opt.samples = 1000;
  const auto r = run_sampler(topo, {}, opt);
  CHECK(r.rows[0].count == 0);
  CHECK(r.rows[0].expected_p == 0.0);
  CHECK_FALSE(r.has_ring);

  opt.kind = SamplerKind::Grid;
  CHECK(code_of([&] { run_sampler(topo, {}, opt); }) == ErrorCode::InvalidArgument);

  GeometricDeployment dep{6, 8, 150.0, 0};
  std::optional<RingNetwork> geo;
  for (; !geo; ++dep.seed) {
    try {
      geo.emplace(build_geometric(dep));
    } catch (const Error&) {
    }
  }
  if (!check_uniform_connectivity(*geo)) {
    opt.kind = SamplerKind::RingsD1;
    CHECK(code_of([&] { run_sampler(Topology(*geo), {}, opt); }) == ErrorCode::NotUniformlyConnected);
    opt.force = true;
    CHECK(run_sampler(Topology(*geo), {}, opt).summary.max_ring_spread > 0.0);
  }
  CHECK(code_of([] { parse_sampler_kind("walk"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(1.0 / 3) == "0.3333333333333333");
}

TEST_CASE("experiment configs") {
  const auto dir = temp_dir();
  {
    std::ofstream(dir / "net.txt") << "type uniform_rings\nsizes 1 4 4\ndelta 4 1\ngamma 1 1\n";
  }
  const std::string text = R"({
    "schema": "rcw-experiment/1",
    "sampler": "rings-d1",
    "network": "net.txt",
    "dist": {"kind": "pid", "p0": 0.1},
    "samples": 20000,
    "seed": 4,
    "outputs": {"csv": "out.csv", "summary": "out.json"}
  })";
  const auto cfg = parse_experiment(text, dir);
  CHECK(cfg.run.kind == SamplerKind::RingsD1);
  CHECK(cfg.dist.kind == DistKind::Pid);
  const std::string summary = run_experiment(cfg);
  CHECK(read_file(dir / "out.json") == summary);
  CHECK(read_file(dir / "out.csv").rfind("node,ring,", 0) == 0);
  CHECK(run_experiment(cfg) == summary);

  const std::string inline_tree = R"({"schema": "rcw-experiment/1", "sampler": "tree",
    "network": {"type": "edge_list", "edges": [[0,1],[1,2]], "weights": [1, 2, 3]},
    "exclude_source": true, "samples": 100})";
  const auto t = parse_experiment(inline_tree, dir);
  CHECK(t.run.kind == SamplerKind::TreeExcl);
  const auto j = nlohmann::json::parse(run_experiment(t));
  CHECK(j["samples"] == 100);

  const std::string aap = R"({"schema": "rcw-experiment/1", "sampler": "aap", "seed": 2,
    "aap": {"betas": [360], "trials": 2, "rings": 5, "per_ring": 5}})";
  CHECK(run_experiment(parse_experiment(aap, dir)) == "beta,success_rate\n360,1\n");

  CHECK(code_of([&] { parse_experiment("{}", dir); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse_experiment("not json", dir); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse_experiment(R"({"schema": "rcw-experiment/1", "sampler": "grid"})", dir); }) ==
        ErrorCode::ParseError);
}
