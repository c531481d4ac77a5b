#include "rcw/rcw.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "rcw/experiment.hpp"
#include "rcw/overlay.hpp"

struct rcw_network {
  rcw::Topology topology;
};

struct rcw_distribution {
  rcw::DistSpec spec;
};

struct rcw_report {
  rcw::RunReport report;
};

namespace {

thread_local std::string last_error;

rcw_status record(rcw_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
rcw_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RCW_OK;
  } catch (const rcw::Error& e) {
    return record(static_cast<rcw_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(RCW_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(RCW_E_INTERNAL, e.what());
  } catch (...) {
    return record(RCW_E_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) rcw::fail(rcw::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rcw::RunOptions to_options(const rcw_run_options* o) {
  rcw::RunOptions r;
  r.kind = rcw::parse_sampler_kind(o->sampler ? o->sampler : "");
  r.samples = o->samples;
  r.seed = o->seed;
  r.source = o->source;
  r.workers = o->workers ? o->workers : 1;
  r.force = o->force != 0;
  r.source_stay = o->source_stay != 0;
  if (o->policy && o->policy_len > 0) r.policy = rcw::HopPolicy{{o->policy, o->policy + o->policy_len}};
  return r;
}

rcw_status run_impl(const rcw_network* net, const rcw_distribution* dist, const rcw_run_options* options,
                    bool draw, rcw_report** out) {
  return guarded([&] {
    require(net && options && out, "null argument");
    *out = nullptr;
    rcw::RunOptions r = to_options(options);
    if (!draw) r.samples = 0;
    const rcw::DistSpec spec = dist ? dist->spec : rcw::DistSpec{};
    *out = new rcw_report{rcw::run_sampler(net->topology, spec, r)};
  });
}

rcw_status make_network(rcw_network** out, auto&& build) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = nullptr;
    *out = new rcw_network{build()};
  });
}

rcw_status make_distribution(rcw_distribution** out, auto&& build) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = nullptr;
    *out = new rcw_distribution{build()};
  });
}

}  // namespace

extern "C" {

const char* rcw_last_error(void) { return last_error.c_str(); }

const char* rcw_status_name(rcw_status status) {
  if (status == RCW_OK) return "Ok";
  if (status == RCW_E_INTERNAL) return "Internal";
  static thread_local std::string name;
  name = rcw::error_name(static_cast<rcw::ErrorCode>(status));
  return name.c_str();
}

void rcw_string_free(char* text) { std::free(text); }

rcw_status rcw_network_load(const char* path, rcw_network** out) {
  return make_network(out, [&] {
    require(path != nullptr, "null path");
    return rcw::load_network(path);
  });
}

rcw_status rcw_network_parse(const char* text, rcw_network** out) {
  return make_network(out, [&] {
    require(text != nullptr, "null text");
    std::istringstream in(text);
    return rcw::parse_network(in);
  });
}

rcw_status rcw_network_grid(int radius, rcw_network** out) {
  return make_network(out, [&] {
    require(radius >= 1, "grid radius must be >= 1");
    return rcw::Topology(rcw::build_grid(rcw::GridSpec{radius}));
  });
}

rcw_status rcw_network_uniform_rings(const size_t* sizes, size_t ring_count, const size_t* delta,
                                     size_t delta_len, const size_t* gamma, size_t gamma_len, int distance2,
                                     rcw_network** out) {
  return make_network(out, [&] {
    require(sizes && delta && gamma, "null array");
    return rcw::Topology(rcw::build_uniform_rings(std::span(sizes, ring_count), std::span(delta, delta_len),
                                                  std::span(gamma, gamma_len), distance2 != 0));
  });
}

rcw_status rcw_network_geometric(uint32_t rings, uint32_t per_ring, double beta, uint64_t seed,
                                 rcw_network** out) {
  return make_network(out, [&] {
    return rcw::Topology(rcw::build_geometric(rcw::GeometricDeployment{rings, per_ring, beta, seed}));
  });
}

rcw_status rcw_network_edge_list(size_t node_count, const uint32_t* edges, size_t edge_count,
                                 const double* weights, rcw_network** out) {
  return make_network(out, [&] {
    require(edges != nullptr || edge_count == 0, "null edges");
    std::vector<rcw::Edge> list;
    for (size_t i = 0; i < edge_count; ++i) list.emplace_back(edges[2 * i], edges[2 * i + 1]);
    std::vector<double> w;
    if (weights) w.assign(weights, weights + node_count);
    return rcw::Topology(rcw::Network(node_count, list, std::move(w)));
  });
}

void rcw_network_free(rcw_network* net) { delete net; }

size_t rcw_network_node_count(const rcw_network* net) {
  if (!net) return 0;
  if (const auto* g = std::get_if<rcw::Network>(&net->topology)) return g->size();
  return std::get<rcw::RingNetwork>(net->topology).node_count();
}

size_t rcw_network_ring_count(const rcw_network* net) {
  if (!net) return 0;
  const auto* r = std::get_if<rcw::RingNetwork>(&net->topology);
  return r ? r->ring_count() : 0;
}

int rcw_network_uniformly_connected(const rcw_network* net) {
  if (!net) return -1;
  const auto* r = std::get_if<rcw::RingNetwork>(&net->topology);
  return r ? (rcw::check_uniform_connectivity(*r) ? 1 : 0) : -1;
}

rcw_status rcw_distribution_uniform(rcw_distribution** out) {
  return make_distribution(out, [] { return rcw::DistSpec{rcw::DistKind::Uniform, 0.0, {}}; });
}

rcw_status rcw_distribution_pid(double p0, rcw_distribution** out) {
  return make_distribution(out, [&] {
    require(p0 >= 0.0 && p0 < 1.0, "p0 must lie in [0,1)");
    return rcw::DistSpec{rcw::DistKind::Pid, p0, {}};
  });
}

rcw_status rcw_distribution_explicit(const double* p, size_t len, rcw_distribution** out) {
  return make_distribution(out, [&] {
    require(p != nullptr && len > 0, "empty distribution");
    return rcw::DistSpec{rcw::DistKind::Explicit, 0.0, {p, p + len}};
  });
}

rcw_status rcw_distribution_load(const char* path, rcw_distribution** out) {
  return make_distribution(out, [&] {
    require(path != nullptr, "null path");
    return rcw::load_distribution(path);
  });
}

rcw_status rcw_distribution_from_arg(const char* arg, double p0, rcw_distribution** out) {
  return make_distribution(out, [&] {
    require(arg != nullptr, "null argument");
    return rcw::distribution_from_arg(arg, p0);
  });
}

void rcw_distribution_free(rcw_distribution* dist) { delete dist; }

rcw_status rcw_policy_load(const char* path, double** values, size_t* len) {
  return guarded([&] {
    require(path && values && len, "null argument");
    const rcw::HopPolicy policy = rcw::load_policy(path);
    *values = static_cast<double*>(std::malloc(std::max<size_t>(1, policy.s.size()) * sizeof(double)));
    if (!*values) throw std::bad_alloc();
    std::copy(policy.s.begin(), policy.s.end(), *values);
    *len = policy.s.size();
  });
}

void rcw_array_free(double* values) { std::free(values); }

void rcw_run_options_init(rcw_run_options* options) {
  if (!options) return;
  *options = rcw_run_options{"tree", 0, 0, 0, 1, 0, 0, nullptr, 0};
}

rcw_status rcw_run(const rcw_network* net, const rcw_distribution* dist, const rcw_run_options* options,
                   rcw_report** out) {
  return run_impl(net, dist, options, true, out);
}

rcw_status rcw_oracle(const rcw_network* net, const rcw_distribution* dist, const rcw_run_options* options,
                      rcw_report** out) {
  return run_impl(net, dist, options, false, out);
}

size_t rcw_report_row_count(const rcw_report* report) { return report ? report->report.rows.size() : 0; }

rcw_status rcw_report_row(const rcw_report* report, size_t index, rcw_row* out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(index < report->report.rows.size(), "row index out of range");
    const auto& r = report->report.rows[index];
    *out = rcw_row{r.node, r.ring, r.expected_p, r.oracle_p, r.count, r.empirical_p, r.rel_error};
  });
}

rcw_status rcw_report_summary(const rcw_report* report, rcw_summary* out) {
  return guarded([&] {
    require(report && out, "null argument");
    const auto& s = report->report.summary;
    *out = rcw_summary{s.mean_rel_error, s.max_rel_error, s.chi2,      s.dof,       s.p_value,
                       s.oracle_chi2,    s.oracle_p_value, s.samples,  s.seed,      s.max_hops,
                       s.mean_hops,      s.hop_bound,      s.max_ring_spread};
  });
}

rcw_status rcw_report_csv(const rcw_report* report, int layout, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(layout >= RCW_CSV_COMPACT && layout <= RCW_CSV_ORACLE, "unknown CSV layout");
    std::ostringstream csv;
    rcw::write_csv(report->report, csv, static_cast<rcw::CsvLayout>(layout));
    *out = dup_string(csv.str());
  });
}

rcw_status rcw_report_summary_json(const rcw_report* report, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = dup_string(rcw::summary_json(report->report));
  });
}

void rcw_report_free(rcw_report* report) { delete report; }

rcw_status rcw_aap_success_rate(const double* betas, size_t beta_count, uint32_t trials, uint64_t seed,
                                uint32_t rings, uint32_t per_ring, rcw_success_row* out) {
  return guarded([&] {
    require(betas && out, "null argument");
    const auto rows = rcw::success_rate_experiment(std::span(betas, beta_count), trials, seed, rings, per_ring);
    for (size_t i = 0; i < rows.size(); ++i) {
      out[i] = rcw_success_row{rows[i].beta, rows[i].success_rate, rows[i].halls_rate, rows[i].trials};
    }
  });
}

rcw_status rcw_success_csv(const rcw_success_row* rows, size_t count, int with_halls, char** out) {
  return guarded([&] {
    require((rows || count == 0) && out, "null argument");
    std::vector<rcw::SuccessRow> table;
    for (size_t i = 0; i < count; ++i) {
      table.push_back({rows[i].beta, rows[i].success_rate, rows[i].halls_rate, rows[i].trials});
    }
    std::ostringstream csv;
    rcw::write_success_csv(table, csv, with_halls != 0);
    *out = dup_string(csv.str());
  });
}

rcw_status rcw_aap_run(const rcw_network* net, uint64_t seed, int* connected, size_t* failed) {
  return guarded([&] {
    require(net && connected && failed, "null argument");
    const auto* rings = std::get_if<rcw::RingNetwork>(&net->topology);
    require(rings != nullptr, "AAP needs a ring network");
    const auto outcome = rcw::try_assign_attachment_points(*rings, {seed, 0, nullptr});
    *connected = outcome.overlay ? 1 : 0;
    *failed = outcome.failed.size();
  });
}

rcw_status rcw_experiment_run(const char* config_path, char** out) {
  return guarded([&] {
    require(config_path != nullptr, "null path");
    const std::string text = rcw::run_experiment(rcw::load_experiment(config_path));
    if (out) *out = dup_string(text);
  });
}

}  // extern "C"
