// Command-line front end. Talks to the library only through rcw.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcw/rcw.h"

namespace {

// Library status s exits with 10 + s; usage errors exit with 2.
constexpr int kUsageExit = 2;
int exit_code(rcw_status status) { return status == RCW_E_INTERNAL ? 3 : 10 + static_cast<int>(status); }

struct Failure {
  rcw_status status;
};

void check(rcw_status status) {
  if (status != RCW_OK) throw Failure{status};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using NetPtr = std::unique_ptr<rcw_network, Deleter<rcw_network, rcw_network_free>>;
using DistPtr = std::unique_ptr<rcw_distribution, Deleter<rcw_distribution, rcw_distribution_free>>;
using ReportPtr = std::unique_ptr<rcw_report, Deleter<rcw_report, rcw_report_free>>;

std::string take(char* text) {
  std::string s(text ? text : "");
  rcw_string_free(text);
  return s;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "rcw: cannot write " << path << "\n";
    throw Failure{RCW_E_IO};
  }
}

struct Common {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
  std::string out = "-";
  std::string summary;
  bool full = false;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c, bool sampling = true) {
  cmd->add_option("--seed", c.seed, "Root RNG seed")->capture_default_str();
  if (sampling) {
    cmd->add_option("--samples", c.samples, "Number of walks")->capture_default_str();
    cmd->add_option("--summary", c.summary, "Write the summary JSON here");
    cmd->add_flag("--full", c.full, "CSV with ring and count columns");
    cmd->add_option("--workers", c.workers, "Sampling threads (output does not depend on it)")
        ->capture_default_str();
  }
  cmd->add_option("--out", c.out, "Output CSV path ('-' for stdout)")->capture_default_str();
}

struct DistArgs {
  std::string dist = "uni";
  double p0 = 0.0;
};

void add_dist(CLI::App* cmd, DistArgs& d) {
  cmd->add_option("--dist", d.dist, "uni, pid or a distribution file")->capture_default_str();
  cmd->add_option("--p0", d.p0, "Source mass for pid")->capture_default_str();
}

DistPtr make_dist(const DistArgs& d) {
  rcw_distribution* dist = nullptr;
  check(rcw_distribution_from_arg(d.dist.c_str(), d.p0, &dist));
  return DistPtr(dist);
}

NetPtr load_net(const std::string& path) {
  rcw_network* net = nullptr;
  check(rcw_network_load(path.c_str(), &net));
  return NetPtr(net);
}

void run_and_write(const rcw_network* net, const rcw_distribution* dist, rcw_run_options& opt,
                   const Common& c) {
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.workers = c.workers;
  rcw_report* raw = nullptr;
  check(rcw_run(net, dist, &opt, &raw));
  ReportPtr report(raw);
  char* csv = nullptr;
  check(rcw_report_csv(report.get(), c.full ? RCW_CSV_FULL : RCW_CSV_COMPACT, &csv));
  emit(take(csv), c.out);
  if (!c.summary.empty()) {
    char* json = nullptr;
    check(rcw_report_summary_json(report.get(), &json));
    emit(take(json), c.summary);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random centrifugal walk node sampling"};
  app.require_subcommand(1);

  // tree
  Common tree_c;
  std::string tree_net;
  std::uint32_t tree_source = 0;
  bool tree_excl = false;
  auto* tree = app.add_subcommand("tree", "Spanning-tree walk on an arbitrary network");
  tree->add_option("--net", tree_net, "Network file")->required();
  tree->add_option("--source", tree_source, "Source node")->capture_default_str();
  tree->add_flag("--exclude-source", tree_excl, "Never select the source");
  add_common(tree, tree_c);

  // grid
  Common grid_c;
  DistArgs grid_d;
  int radius = 1;
  auto* grid = app.add_subcommand("grid", "Walk on the diamond grid");
  grid->add_option("--radius", radius, "Grid radius R")->required();
  add_dist(grid, grid_d);
  add_common(grid, grid_c);

  // rings
  Common rings_c;
  DistArgs rings_d;
  std::string rings_net, mode = "d1", policy_path;
  bool force = false, source_stay = false;
  auto* rings = app.add_subcommand("rings", "Walk on a concentric rings network");
  rings->add_option("--net", rings_net, "Network file")->required();
  rings->add_option("--mode", mode, "d1 or d2")->check(CLI::IsMember({"d1", "d2"}))->capture_default_str();
  rings->add_option("--policy", policy_path, "Hop policy file for d2");
  rings->add_flag("--force", force, "Run d1 on a non-uniform network with global ring sizes");
  rings->add_flag("--source-stay", source_stay, "d2: let the source select itself with p_0");
  add_dist(rings, rings_d);
  add_common(rings, rings_c);

  // aap
  Common aap_c;
  std::uint32_t aap_rings = 100, per_ring = 100, trials = 100;
  std::vector<double> betas{15, 30, 45, 60, 75, 90, 150, 180, 360};
  bool halls = false;
  auto* aap = app.add_subcommand("aap", "Attachment-point success rate over geometric deployments");
  aap->add_option("--rings", aap_rings, "Rings per deployment")->capture_default_str();
  aap->add_option("--per-ring", per_ring, "Nodes per ring")->capture_default_str();
  aap->add_option("--beta", betas, "Connectivity angles in degrees")->capture_default_str();
  aap->add_option("--trials", trials, "Deployments per angle")->capture_default_str();
  aap->add_flag("--halls", halls, "Add a column with the Hall inequality rate");
  add_common(aap, aap_c, false);

  // overlay-sample
  Common ov_c;
  DistArgs ov_d;
  std::string ov_net;
  auto* ov = app.add_subcommand("overlay-sample", "Walk over the attachment-point overlay");
  ov->add_option("--net", ov_net, "Network file")->required();
  add_dist(ov, ov_d);
  add_common(ov, ov_c);

  // oracle
  Common or_c;
  DistArgs or_d;
  std::string or_net, or_sampler = "tree", or_policy;
  std::uint32_t or_source = 0;
  bool or_source_stay = false;
  auto* oracle = app.add_subcommand("oracle", "Exact selection law, no sampling");
  oracle->add_option("--net", or_net, "Network file")->required();
  oracle->add_option("--sampler", or_sampler, "tree, tree-excl, grid, rings-d1, rings-d2 or overlay")
      ->capture_default_str();
  oracle->add_option("--source", or_source, "Source node (tree)")->capture_default_str();
  oracle->add_option("--policy", or_policy, "Hop policy file for rings-d2");
  oracle->add_flag("--source-stay", or_source_stay, "rings-d2: allow p_0 > 0");
  add_dist(oracle, or_d);
  add_common(oracle, or_c, false);

  // experiment
  std::string config;
  auto* exp = app.add_subcommand("experiment", "Run a JSON experiment config");
  exp->add_option("config", config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  std::vector<double> policy_storage;
  auto load_policy = [&](const std::string& path, rcw_run_options& opt) {
    if (path.empty()) return;
    double* values = nullptr;
    size_t len = 0;
    check(rcw_policy_load(path.c_str(), &values, &len));
    policy_storage.assign(values, values + len);
    rcw_array_free(values);
    opt.policy = policy_storage.data();
    opt.policy_len = policy_storage.size();
  };

  try {
    rcw_run_options opt;
    rcw_run_options_init(&opt);
    if (*tree) {
      NetPtr net = load_net(tree_net);
      opt.sampler = tree_excl ? "tree-excl" : "tree";
      opt.source = tree_source;
      run_and_write(net.get(), nullptr, opt, tree_c);
    } else if (*grid) {
      rcw_network* raw = nullptr;
      check(rcw_network_grid(radius, &raw));
      NetPtr net(raw);
      DistPtr dist = make_dist(grid_d);
      opt.sampler = "grid";
      run_and_write(net.get(), dist.get(), opt, grid_c);
    } else if (*rings) {
      NetPtr net = load_net(rings_net);
      DistPtr dist = make_dist(rings_d);
      opt.sampler = mode == "d2" ? "rings-d2" : "rings-d1";
      opt.force = force;
      opt.source_stay = source_stay;
      load_policy(policy_path, opt);
      run_and_write(net.get(), dist.get(), opt, rings_c);
    } else if (*aap) {
      std::vector<rcw_success_row> rows(betas.size());
      check(rcw_aap_success_rate(betas.data(), betas.size(), trials, aap_c.seed, aap_rings, per_ring, rows.data()));
      char* csv = nullptr;
      check(rcw_success_csv(rows.data(), rows.size(), halls, &csv));
      emit(take(csv), aap_c.out);
    } else if (*ov) {
      NetPtr net = load_net(ov_net);
      DistPtr dist = make_dist(ov_d);
      opt.sampler = "overlay";
      run_and_write(net.get(), dist.get(), opt, ov_c);
    } else if (*oracle) {
      NetPtr net = load_net(or_net);
      DistPtr dist = make_dist(or_d);
      opt.sampler = or_sampler.c_str();
      opt.source = or_source;
      opt.seed = or_c.seed;
      opt.source_stay = or_source_stay;
      load_policy(or_policy, opt);
      rcw_report* raw = nullptr;
      check(rcw_oracle(net.get(), dist.get(), &opt, &raw));
      ReportPtr report(raw);
      char* csv = nullptr;
      check(rcw_report_csv(report.get(), RCW_CSV_ORACLE, &csv));
      emit(take(csv), or_c.out);
    } else if (*exp) {
      char* text = nullptr;
      check(rcw_experiment_run(config.c_str(), &text));
      std::cout << take(text);
    }
  } catch (const Failure& f) {
    const char* message = rcw_last_error();
    std::cerr << "rcw: " << rcw_status_name(f.status) << ": " << (message && *message ? message : "failed")
              << "\n";
    return exit_code(f.status);
  }
  return 0;
}
