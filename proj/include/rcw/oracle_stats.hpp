#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcw/error.hpp"
#include "rcw/random.hpp"

namespace rcw {

// Outcome of one centrifugal walk.
struct WalkResult {
  NodeId node = 0;
  std::uint32_t hops = 0;
};

struct Hop {
  NodeId to;
  double probability;
};

// Static description of a walk from a fixed source: the stay probability at
// each node and the outward hop distribution. Walks that only move away from
// the source make the hop graph acyclic.
struct WalkModel {
  NodeId source = 0;
  std::vector<double> stay;
  std::vector<std::vector<Hop>> hops;
  // Optional ring index per node, used for per-ring visit statistics.
  std::vector<std::uint32_t> ring;
};

struct ExactLaw {
  std::vector<double> probability;  // selection probability per node
  std::vector<double> visit;        // visit probability per node
  std::vector<double> ring_visit;   // mean visit probability per ring
  std::vector<double> ring_spread;  // max - min visit probability per ring

  double total() const;
  double max_ring_spread() const;
};

enum class TopoOrder { Ascending, Descending };

// Exact law of the walk: v(y) = sum_x v(x)(1 - q(x)) h(x,y), p(x) = v(x) q(x),
// propagated in a topological order of the hop graph (Kahn's algorithm, ties
// broken by ascending or descending node id). Throws CyclicHopGraph.
ExactLaw dag_oracle(const WalkModel& model, TopoOrder order = TopoOrder::Ascending);

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

inline constexpr double kMinExpectedCount = 5.0;

// Goodness of fit of `counts` against `law`. Cells with expected count below
// kMinExpectedCount are pooled into one cell; cells with zero probability and
// zero count are skipped, a hit on a zero-probability cell gives p = 0.
ChiSquare chi_square(std::span<const std::uint64_t> counts, std::span<const double> law);

struct SelectionReport {
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
  // e_i = |count - f| / f with f = p * samples; NaN where f < kMinExpectedCount.
  std::vector<double> rel_error;
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
  ChiSquare chi;
};

SelectionReport relative_error(std::span<const std::uint64_t> counts, std::span<const double> law,
                               std::uint64_t samples);

// Finite relative errors of a report, in node order.
std::vector<double> defined_errors(const SelectionReport& report);

// Vose alias table for O(1) categorical draws.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);
  std::size_t size() const noexcept { return prob_.size(); }
  std::size_t draw(SplitMix64& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// `samples` independent draws from `law`, returned as per-node counts.
std::vector<std::uint64_t> ideal_sampler(std::span<const double> law, std::uint64_t samples,
                                         std::uint64_t seed);

// Expected mean relative error of an ideal sampler for one node with
// probability p after s draws (normal approximation of the binomial).
double ideal_mean_rel_error(double p, std::uint64_t samples);

// Upper-tail probability of the Kolmogorov distribution.
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// One-sample test against U(0,1).
KsResult ks_uniform(std::vector<double> a);

}  // namespace rcw
