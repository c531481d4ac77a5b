#include "rcw/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rcw/grid_sampler.hpp"
#include "rcw/ring_sampler.hpp"
#include "rcw/tree_sampler.hpp"

namespace rcw {

namespace {

using Walker = std::function<WalkResult(SplitMix64&)>;

struct Tally {
  std::vector<std::uint64_t> counts;
  std::uint64_t hop_sum = 0;
  std::uint32_t max_hops = 0;
};

Tally draw(const Walker& walker, std::size_t nodes, std::uint64_t samples, std::uint64_t seed,
           unsigned workers) {
  workers = std::max(1u, workers);
  std::vector<Tally> shards(workers);
  auto run = [&](unsigned w) {
    Tally& t = shards[w];
    t.counts.assign(nodes, 0);
    const std::uint64_t lo = samples * w / workers, hi = samples * (w + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SplitMix64 rng = stream(seed, i);
      const WalkResult r = walker(rng);
      ++t.counts[r.node];
      t.hop_sum += r.hops;
      t.max_hops = std::max(t.max_hops, r.hops);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    // Walkers only read shared state; an exception in a worker is rethrown here.
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          run(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Tally total;
  total.counts.assign(nodes, 0);
  for (const auto& t : shards) {
    for (std::size_t x = 0; x < nodes; ++x) total.counts[x] += t.counts[x];
    total.hop_sum += t.hop_sum;
    total.max_hops = std::max(total.max_hops, t.max_hops);
  }
  return total;
}

const RingNetwork& rings_of(const Topology& topology, SamplerKind kind) {
  if (const auto* net = std::get_if<RingNetwork>(&topology)) return *net;
  fail(ErrorCode::InvalidArgument,
       std::string(sampler_name(kind)) + " needs a ring network (grid, uniform_rings or geometric)");
}

}  // namespace

SamplerKind parse_sampler_kind(const std::string& name) {
  if (name == "tree") return SamplerKind::Tree;
  if (name == "tree-excl") return SamplerKind::TreeExcl;
  if (name == "grid") return SamplerKind::Grid;
  if (name == "rings-d1" || name == "d1") return SamplerKind::RingsD1;
  if (name == "rings-d2" || name == "d2") return SamplerKind::RingsD2;
  if (name == "overlay") return SamplerKind::Overlay;
  fail(ErrorCode::InvalidArgument, "unknown sampler '" + name + "'");
}

std::string_view sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Tree: return "tree";
    case SamplerKind::TreeExcl: return "tree-excl";
    case SamplerKind::Grid: return "grid";
    case SamplerKind::RingsD1: return "rings-d1";
    case SamplerKind::RingsD2: return "rings-d2";
    case SamplerKind::Overlay: return "overlay";
  }
  return "?";
}

RunReport run_sampler(const Topology& topology, const DistSpec& dist, const RunOptions& options) {
  RunReport report;
  report.kind = options.kind;
  std::vector<double> target, oracle;
  std::vector<std::uint32_t> ring;
  Walker walker;
  std::uint32_t hop_bound = 0;
  double spread = 0.0;

  // Samplers hold references into these, so they live for the whole run.
  std::optional<Network> tree_net;
  std::optional<AggregatedTree> agg;
  std::optional<DistanceDistribution> ddist;
  std::optional<RingSamplerD1> d1;
  std::optional<RingSamplerD2> d2;
  std::optional<AttachmentOverlay> overlay;
  std::optional<OverlaySampler> ov_sampler;
  GridSpec grid;

  switch (options.kind) {
    case SamplerKind::Tree:
    case SamplerKind::TreeExcl: {
      const bool excl = options.kind == SamplerKind::TreeExcl;
      if (const auto* net = std::get_if<Network>(&topology)) {
        tree_net.emplace(*net);
      } else {
        tree_net.emplace(std::get<RingNetwork>(topology).to_network());
      }
      if (options.source >= tree_net->size()) fail(ErrorCode::InvalidArgument, "source out of range");
      if (excl && tree_net->size() < 2) fail(ErrorCode::DegenerateNetwork, "cannot exclude the only node");
      agg.emplace(aggregate(*tree_net, {options.seed, 0, nullptr}));
      target = WeightDistribution::of(*tree_net).law(excl ? std::optional<NodeId>(options.source) : std::nullopt);
      oracle = dag_oracle(walk_model(*agg, options.source, excl)).probability;
      ring.assign(tree_net->size(), 0);
      hop_bound = agg->diameter();
      const NodeId source = options.source;
      walker = [&agg, source, excl](SplitMix64& rng) {
        return excl ? sample_excluding_source(*agg, source, rng) : sample(*agg, source, rng);
      };
      break;
    }
    case SamplerKind::Grid: {
      const RingNetwork& net = rings_of(topology, options.kind);
      if (!net.is_grid()) fail(ErrorCode::InvalidArgument, "grid sampler needs a grid network");
      grid.radius = static_cast<int>(net.radius());
      ddist.emplace(resolve(dist, net.ring_sizes()));
      const ExactLaw law = grid_oracle(grid, *ddist);
      oracle = law.probability;
      spread = law.max_ring_spread();
      target = ddist->node_law(net);
      hop_bound = static_cast<std::uint32_t>(net.radius());
      walker = [&grid, &ddist](SplitMix64& rng) {
        const GridSample s = sample_grid(grid, *ddist, rng);
        return WalkResult{static_cast<NodeId>(grid_node_id(s.coord, grid.radius)), s.hops};
      };
      break;
    }
    case SamplerKind::RingsD1: {
      const RingNetwork& net = rings_of(topology, options.kind);
      ddist.emplace(resolve(dist, net.ring_sizes()));
      d1.emplace(net, *ddist, options.force);
      const ExactLaw law = rings_oracle(net, *ddist, RingMode::D1);
      oracle = law.probability;
      spread = law.max_ring_spread();
      target = ddist->node_law(net);
      hop_bound = static_cast<std::uint32_t>(net.radius());
      walker = [&d1](SplitMix64& rng) { return d1->sample(rng); };
      break;
    }
    case SamplerKind::RingsD2: {
      const RingNetwork& net = rings_of(topology, options.kind);
      ddist.emplace(resolve(dist, net.ring_sizes()));
      d2.emplace(net, *ddist, options.policy.value_or(HopPolicy{}), options.source_stay);
      const ExactLaw law = rings_oracle(net, *ddist, RingMode::D2, &d2->policy(), options.source_stay);
      oracle = law.probability;
      spread = law.max_ring_spread();
      target = ddist->node_law(net);
      hop_bound = static_cast<std::uint32_t>(net.radius());
      walker = [&d2](SplitMix64& rng) { return d2->sample(rng); };
      break;
    }
    case SamplerKind::Overlay: {
      const RingNetwork& net = rings_of(topology, options.kind);
      ddist.emplace(resolve(dist, net.ring_sizes()));
      overlay.emplace(assign_attachment_points(net, {options.seed, 0, nullptr}));
      ov_sampler.emplace(*overlay, *ddist);
      const ExactLaw law = overlay_oracle(*overlay, *ddist);
      oracle = law.probability;
      spread = law.max_ring_spread();
      target = ddist->node_law(net);
      hop_bound = static_cast<std::uint32_t>(net.radius());
      walker = [&ov_sampler](SplitMix64& rng) { return ov_sampler->sample(rng); };
      break;
    }
  }
  if (ring.empty()) {
    const RingNetwork& net = std::get<RingNetwork>(topology);
    ring.resize(net.node_count());
    for (NodeId x = 0; x < net.node_count(); ++x) ring[x] = net.ring_of(x);
    report.has_ring = true;
  }

  const std::size_t n = target.size();
  RunSummary& s = report.summary;
  s.samples = options.samples;
  s.seed = options.seed;
  s.hop_bound = hop_bound;
  s.max_ring_spread = spread;
  report.rows.resize(n);
  for (NodeId x = 0; x < n; ++x) {
    report.rows[x] = ReportRow{x, ring[x], target[x], oracle[x], 0, 0.0,
                               std::numeric_limits<double>::quiet_NaN()};
  }
  if (options.samples == 0) return report;

  const Tally tally = draw(walker, n, options.samples, options.seed, options.workers);
  const SelectionReport sel = relative_error(tally.counts, target, options.samples);
  const ChiSquare vs_oracle = chi_square(tally.counts, oracle);
  for (NodeId x = 0; x < n; ++x) {
    auto& row = report.rows[x];
    row.count = tally.counts[x];
    row.empirical_p = static_cast<double>(row.count) / static_cast<double>(options.samples);
    row.rel_error = sel.rel_error[x];
  }
  s.mean_rel_error = sel.mean_rel_error;
  s.max_rel_error = sel.max_rel_error;
  s.chi2 = sel.chi.statistic;
  s.dof = sel.chi.dof;
  s.p_value = sel.chi.p_value;
  s.oracle_chi2 = vs_oracle.statistic;
  s.oracle_p_value = vs_oracle.p_value;
  s.max_hops = tally.max_hops;
  s.mean_hops = static_cast<double>(tally.hop_sum) / static_cast<double>(options.samples);
  return report;
}

// ---------------------------------------------------------------------------

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv(const RunReport& report, std::ostream& out, CsvLayout layout) {
  switch (layout) {
    case CsvLayout::Compact:
      out << (report.has_ring ? "node,ring,expected_p,empirical_p,rel_error\n"
                              : "node,expected_p,empirical_p,rel_error\n");
      for (const auto& r : report.rows) {
        out << r.node << ',';
        if (report.has_ring) out << r.ring << ',';
        out << format_number(r.expected_p) << ',' << format_number(r.empirical_p) << ','
            << format_number(r.rel_error) << '\n';
      }
      break;
    case CsvLayout::Full:
      out << "node,ring,expected_p,count,empirical_p,rel_error\n";
      for (const auto& r : report.rows) {
        out << r.node << ',' << r.ring << ',' << format_number(r.expected_p) << ',' << r.count << ','
            << format_number(r.empirical_p) << ',' << format_number(r.rel_error) << '\n';
      }
      break;
    case CsvLayout::Oracle:
      out << "node,ring,expected_p,oracle_p\n";
      for (const auto& r : report.rows) {
        out << r.node << ',' << r.ring << ',' << format_number(r.expected_p) << ','
            << format_number(r.oracle_p) << '\n';
      }
      break;
  }
}

std::string summary_json(const RunReport& report) {
  const RunSummary& s = report.summary;
  nlohmann::ordered_json j;
  j["sampler"] = sampler_name(report.kind);
  j["mean_rel_error"] = s.mean_rel_error;
  j["max_rel_error"] = s.max_rel_error;
  j["chi2"] = s.chi2;
  j["dof"] = s.dof;
  j["p_value"] = s.p_value;
  j["oracle_chi2"] = s.oracle_chi2;
  j["oracle_p_value"] = s.oracle_p_value;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["max_hops"] = s.max_hops;
  j["mean_hops"] = s.mean_hops;
  j["hop_bound"] = s.hop_bound;
  j["max_ring_spread"] = s.max_ring_spread;
  return j.dump(2) + "\n";
}

void write_success_csv(std::span<const SuccessRow> rows, std::ostream& out, bool with_halls) {
  out << (with_halls ? "beta,success_rate,halls_rate\n" : "beta,success_rate\n");
  for (const auto& r : rows) {
    out << format_number(r.beta) << ',' << format_number(r.success_rate);
    if (with_halls) out << ',' << format_number(r.halls_rate);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  fail(ErrorCode::ParseError, "unsupported value in network object: " + v.dump());
}

// Inline network objects are rewritten into the text format.
std::string network_text_of(const json& obj) {
  std::ostringstream out;
  for (const auto& [key, value] : obj.items()) {
    if (key == "edges" || key == "weights") continue;
    out << key;
    if (value.is_array()) {
      for (const auto& v : value) out << ' ' << scalar_text(v);
    } else {
      out << ' ' << scalar_text(value);
    }
    out << '\n';
  }
  if (obj.contains("edges")) {
    out << "edges\n";
    for (const auto& e : obj["edges"]) {
      if (!e.is_array() || e.size() != 2) fail(ErrorCode::ParseError, "edges must be [u, v] pairs");
      out << e[0].get<long long>() << ' ' << e[1].get<long long>() << '\n';
    }
  }
  if (obj.contains("weights")) {
    out << "weights\n";
    const auto& w = obj["weights"];
    if (!w.is_array()) fail(ErrorCode::ParseError, "weights must be an array, one per node");
    for (std::size_t i = 0; i < w.size(); ++i) out << i << ' ' << scalar_text(w[i]) << '\n';
  }
  return out.str();
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::ParseError, "config must be a JSON object");
  if (get_or<std::string>(j, "schema", "") != kExperimentSchema) {
    fail(ErrorCode::ParseError, std::string("config schema must be \"") + kExperimentSchema + "\"");
  }
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.sampler = get_or<std::string>(j, "sampler", "");
  if (c.sampler.empty()) fail(ErrorCode::ParseError, "config needs a sampler");
  c.run.seed = get_or<std::uint64_t>(j, "seed", 0);

  if (c.sampler == "aap") {
    const json a = j.value("aap", json::object());
    c.betas = get_or<std::vector<double>>(a, "betas", {15, 30, 45, 60, 75, 90, 150, 180, 360});
    c.trials = get_or<std::uint32_t>(a, "trials", 100);
    c.rings = get_or<std::uint32_t>(a, "rings", 100);
    c.per_ring = get_or<std::uint32_t>(a, "per_ring", 100);
    c.halls_column = get_or<bool>(a, "halls", false);
  } else {
    c.run.kind = parse_sampler_kind(c.sampler);
    if (!j.contains("network")) fail(ErrorCode::ParseError, "config needs a network");
    const json& net = j["network"];
    if (net.is_string()) {
      c.network_text = read_file(resolve_path(base_dir, net.get<std::string>()));
    } else if (net.is_object()) {
      c.network_text = network_text_of(net);
    } else {
      fail(ErrorCode::ParseError, "network must be a path or an object");
    }
    if (j.contains("dist")) {
      const json& d = j["dist"];
      if (d.is_string()) {
        const std::string s = d.get<std::string>();
        c.dist = (s == "uni" || s == "uniform" || s == "pid")
                     ? distribution_from_arg(s, get_or<double>(j, "p0", 0.0))
                     : load_distribution(resolve_path(base_dir, s));
      } else if (d.is_object()) {
        const std::string kind = get_or<std::string>(d, "kind", "uniform");
        std::ostringstream text;
        text << "kind " << kind << '\n';
        if (d.contains("p0")) text << "p0 " << format_number(d["p0"].get<double>()) << '\n';
        if (d.contains("p")) {
          text << 'p';
          for (const auto& v : d["p"]) text << ' ' << format_number(v.get<double>());
          text << '\n';
        }
        std::istringstream in(text.str());
        c.dist = parse_distribution(in);
      } else {
        fail(ErrorCode::ParseError, "dist must be a string or an object");
      }
    }
    c.run.samples = get_or<std::uint64_t>(j, "samples", 0);
    c.run.source = get_or<NodeId>(j, "source", 0);
    c.run.workers = get_or<unsigned>(j, "workers", 1);
    c.run.force = get_or<bool>(j, "force", false);
    c.run.source_stay = get_or<bool>(j, "source_stay", false);
    if (get_or<bool>(j, "exclude_source", false)) {
      if (c.run.kind != SamplerKind::Tree && c.run.kind != SamplerKind::TreeExcl) {
        fail(ErrorCode::ParseError, "exclude_source applies to the tree sampler only");
      }
      c.run.kind = SamplerKind::TreeExcl;
    }
    if (j.contains("policy")) {
      const json& p = j["policy"];
      if (p.is_string()) {
        c.run.policy = load_policy(resolve_path(base_dir, p.get<std::string>()));
      } else {
        c.run.policy = HopPolicy{get_or<std::vector<double>>(j, "policy", {})};
      }
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (o.contains("csv")) c.csv = resolve_path(base_dir, o["csv"].get<std::string>());
    if (o.contains("full_csv")) c.full_csv = resolve_path(base_dir, o["full_csv"].get<std::string>());
    if (o.contains("summary")) c.summary = resolve_path(base_dir, o["summary"].get<std::string>());
  }
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_file(path), path.parent_path());
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string run_experiment(const ExperimentConfig& config) {
  if (config.sampler == "aap") {
    const auto rows = success_rate_experiment(config.betas, config.trials, config.run.seed, config.rings,
                                              config.per_ring);
    std::ostringstream csv;
    write_success_csv(rows, csv, config.halls_column);
    if (config.csv) write_text(*config.csv, csv.str());
    return csv.str();
  }
  std::istringstream in(config.network_text);
  const Topology topology = parse_network(in);
  const RunReport report = run_sampler(topology, config.dist, config.run);
  if (config.csv) {
    std::ostringstream csv;
    write_csv(report, csv, CsvLayout::Compact);
    write_text(*config.csv, csv.str());
  }
  if (config.full_csv) {
    std::ostringstream csv;
    write_csv(report, csv, CsvLayout::Full);
    write_text(*config.full_csv, csv.str());
  }
  const std::string summary = summary_json(report);
  if (config.summary) write_text(*config.summary, summary);
  return summary;
}

}  // namespace rcw
