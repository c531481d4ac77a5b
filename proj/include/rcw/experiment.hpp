#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcw/io.hpp"
#include "rcw/oracle_stats.hpp"
#include "rcw/overlay.hpp"

namespace rcw {

enum class SamplerKind { Tree, TreeExcl, Grid, RingsD1, RingsD2, Overlay };

SamplerKind parse_sampler_kind(const std::string& name);
std::string_view sampler_name(SamplerKind kind);

struct RunOptions {
  SamplerKind kind = SamplerKind::Tree;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  NodeId source = 0;          // tree samplers only
  unsigned workers = 1;
  bool force = false;         // rings-d1 on non-uniform networks
  bool source_stay = false;   // rings-d2 with p_0 > 0
  std::optional<HopPolicy> policy;
};

struct ReportRow {
  NodeId node = 0;
  std::uint32_t ring = 0;
  double expected_p = 0.0;  // target law
  double oracle_p = 0.0;    // exact law of the walk
  std::uint64_t count = 0;
  double empirical_p = 0.0;
  double rel_error = 0.0;   // NaN where the expected count is below 5
};

struct RunSummary {
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
  double chi2 = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  double oracle_chi2 = 0.0;
  double oracle_p_value = 1.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t max_hops = 0;
  double mean_hops = 0.0;
  std::uint32_t hop_bound = 0;
  double max_ring_spread = 0.0;  // oracle visit spread within a ring
};

struct RunReport {
  SamplerKind kind = SamplerKind::Tree;
  bool has_ring = false;
  std::vector<ReportRow> rows;
  RunSummary summary;
};

// Target law, exact walk law and, when samples > 0, empirical counts.
// Walk i draws from stream(seed, i), so counts do not depend on `workers`.
RunReport run_sampler(const Topology& topology, const DistSpec& dist, const RunOptions& options);

enum class CsvLayout { Compact, Full, Oracle };

// Compact: node,expected_p,empirical_p,rel_error (with ring after node for
// ring samplers). Full: node,ring,expected_p,count,empirical_p,rel_error.
// Oracle: node,ring,expected_p,oracle_p.
void write_csv(const RunReport& report, std::ostream& out, CsvLayout layout = CsvLayout::Compact);
std::string summary_json(const RunReport& report);

void write_success_csv(std::span<const SuccessRow> rows, std::ostream& out, bool with_halls = false);

// Shortest round-trip decimal text; "nan" for NaN.
std::string format_number(double value);

// JSON experiment config with "schema": "rcw-experiment/1". Relative paths
// resolve against the config file's directory.
struct ExperimentConfig {
  std::string sampler;  // tree|tree-excl|grid|rings-d1|rings-d2|overlay|aap
  std::filesystem::path base_dir;
  std::string network_text;  // network description, inline or read from file
  DistSpec dist;
  RunOptions run;
  // aap experiment
  std::vector<double> betas;
  std::uint32_t trials = 1;
  std::uint32_t rings = 100;
  std::uint32_t per_ring = 100;
  bool halls_column = false;
  // outputs
  std::optional<std::filesystem::path> csv, full_csv, summary;
};

inline constexpr const char* kExperimentSchema = "rcw-experiment/1";

ExperimentConfig parse_experiment(const std::string& json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

// Runs the configured experiment and writes its outputs; returns the summary
// JSON (or the success table CSV for aap).
std::string run_experiment(const ExperimentConfig& config);

}  // namespace rcw
