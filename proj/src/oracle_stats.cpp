#include "rcw/oracle_stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace rcw {

double ExactLaw::total() const {
  double sum = 0.0;
  for (double p : probability) sum += p;
  return sum;
}

double ExactLaw::max_ring_spread() const {
  double spread = 0.0;
  for (double s : ring_spread) spread = std::max(spread, s);
  return spread;
}

namespace {

template <class Compare>
std::vector<NodeId> topological_order(const WalkModel& model, const std::vector<char>& reachable,
                                       std::size_t reachable_count) {
  const std::size_t n = model.stay.size();
  std::vector<std::uint32_t> indegree(n, 0);
  for (NodeId x = 0; x < n; ++x) {
    if (!reachable[x]) continue;
    for (const Hop& h : model.hops[x]) ++indegree[h.to];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, Compare> ready;
  for (NodeId x = 0; x < n; ++x) {
    if (reachable[x] && indegree[x] == 0) ready.push(x);
  }
  std::vector<NodeId> order;
  order.reserve(reachable_count);
  while (!ready.empty()) {
    const NodeId x = ready.top();
    ready.pop();
    order.push_back(x);
    for (const Hop& h : model.hops[x]) {
      if (--indegree[h.to] == 0) ready.push(h.to);
    }
  }
  if (order.size() != reachable_count) {
    fail(ErrorCode::CyclicHopGraph, "hop graph has a cycle reachable from the source");
  }
  return order;
}

}  // namespace

ExactLaw dag_oracle(const WalkModel& model, TopoOrder order) {
  const std::size_t n = model.stay.size();
  if (model.hops.size() != n || model.source >= n) {
    fail(ErrorCode::InvalidArgument, "walk model is inconsistent");
  }
  std::vector<char> reachable(n, 0);
  std::size_t reachable_count = 0;
  std::vector<NodeId> stack{model.source};
  reachable[model.source] = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    ++reachable_count;
    for (const Hop& h : model.hops[x]) {
      if (h.to >= n) fail(ErrorCode::InvalidArgument, "hop target out of range");
      if (!reachable[h.to]) {
        reachable[h.to] = 1;
        stack.push_back(h.to);
      }
    }
  }

  // std::priority_queue pops the largest element under its comparator.
  const auto sequence = order == TopoOrder::Ascending
                            ? topological_order<std::greater<NodeId>>(model, reachable, reachable_count)
                            : topological_order<std::less<NodeId>>(model, reachable, reachable_count);

  ExactLaw law;
  law.visit.assign(n, 0.0);
  law.probability.assign(n, 0.0);
  law.visit[model.source] = 1.0;
  for (NodeId x : sequence) {
    const double v = law.visit[x];
    law.probability[x] = v * model.stay[x];
    const double passing = v * (1.0 - model.stay[x]);
    for (const Hop& h : model.hops[x]) law.visit[h.to] += passing * h.probability;
  }

  if (!model.ring.empty()) {
    std::uint32_t rings = 0;
    for (auto k : model.ring) rings = std::max(rings, k + 1);
    std::vector<double> lo(rings, std::numeric_limits<double>::infinity());
    std::vector<double> hi(rings, -std::numeric_limits<double>::infinity());
    std::vector<double> sum(rings, 0.0);
    std::vector<std::size_t> count(rings, 0);
    for (NodeId x = 0; x < n; ++x) {
      const auto k = model.ring[x];
      lo[k] = std::min(lo[k], law.visit[x]);
      hi[k] = std::max(hi[k], law.visit[x]);
      sum[k] += law.visit[x];
      ++count[k];
    }
    law.ring_visit.resize(rings);
    law.ring_spread.resize(rings);
    for (std::uint32_t k = 0; k < rings; ++k) {
      law.ring_visit[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : 0.0;
      law.ring_spread[k] = count[k] ? hi[k] - lo[k] : 0.0;
    }
  }
  return law;
}

// ---------------------------------------------------------------------------

ChiSquare chi_square(std::span<const std::uint64_t> counts, std::span<const double> law) {
  if (counts.size() != law.size()) fail(ErrorCode::InvalidArgument, "counts and law differ in size");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  ChiSquare result;
  if (total == 0) return result;

  const double s = static_cast<double>(total);
  std::size_t cells = 0;
  double pooled_expected = 0.0, pooled_observed = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = law[i] * s;
    const double observed = static_cast<double>(counts[i]);
    if (law[i] <= 0.0) {
      if (counts[i] > 0) {
        result.statistic = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        return result;
      }
      continue;
    }
    if (expected < kMinExpectedCount) {
      pooled_expected += expected;
      pooled_observed += observed;
      continue;
    }
    result.statistic += (observed - expected) * (observed - expected) / expected;
    ++cells;
  }
  if (pooled_expected > 0.0) {
    const double d = pooled_observed - pooled_expected;
    result.statistic += d * d / pooled_expected;
    ++cells;
  }
  result.dof = cells > 0 ? cells - 1 : 0;
  result.p_value = result.dof == 0
                       ? 1.0
                       : boost::math::gamma_q(static_cast<double>(result.dof) / 2.0,
                                              result.statistic / 2.0);
  return result;
}

SelectionReport relative_error(std::span<const std::uint64_t> counts, std::span<const double> law,
                               std::uint64_t samples) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "relative error needs samples > 0");
  if (counts.size() != law.size()) fail(ErrorCode::InvalidArgument, "counts and law differ in size");
  SelectionReport report;
  report.counts.assign(counts.begin(), counts.end());
  report.samples = samples;
  report.rel_error.assign(counts.size(), std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = law[i] * static_cast<double>(samples);
    if (expected < kMinExpectedCount) continue;
    const double e = std::fabs(static_cast<double>(counts[i]) - expected) / expected;
    report.rel_error[i] = e;
    sum += e;
    ++defined;
    report.max_rel_error = std::max(report.max_rel_error, e);
  }
  report.mean_rel_error = defined ? sum / static_cast<double>(defined) : 0.0;
  report.chi = chi_square(counts, law);
  return report;
}

std::vector<double> defined_errors(const SelectionReport& report) {
  std::vector<double> out;
  for (double e : report.rel_error) {
    if (!std::isnan(e)) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size(), 0.0), alias_(weights.size(), 0) {
  if (weights.empty()) fail(ErrorCode::InvalidArgument, "alias table needs weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::InvalidArgument, "alias weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorCode::InvalidArgument, "alias weights sum to zero");

  const double n = static_cast<double>(weights.size());
  std::vector<double> scaled(weights.size());
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    scaled[i] = weights[i] * n / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto l : large) prob_[l] = 1.0;
  for (auto s : small) prob_[s] = 1.0;
}

std::size_t AliasTable::draw(SplitMix64& rng) const {
  const std::size_t column = rng.below(prob_.size());
  return rng.uniform() < prob_[column] ? column : alias_[column];
}

std::vector<std::uint64_t> ideal_sampler(std::span<const double> law, std::uint64_t samples,
                                         std::uint64_t seed) {
  const AliasTable table(law);
  SplitMix64 rng(mix64(seed ^ 0x1de41c0ffee5eedULL));
  std::vector<std::uint64_t> counts(law.size(), 0);
  for (std::uint64_t i = 0; i < samples; ++i) ++counts[table.draw(rng)];
  return counts;
}

double ideal_mean_rel_error(double p, std::uint64_t samples) {
  const double s = static_cast<double>(samples);
  return std::sqrt(2.0 / std::numbers::pi) * std::sqrt((1.0 - p) / (p * s));
}

// ---------------------------------------------------------------------------

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "KS test needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

KsResult ks_uniform(std::vector<double> a) {
  if (a.empty()) fail(ErrorCode::InvalidArgument, "KS test needs a non-empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - a[i], a[i] - lo});
  }
  const double ne = std::sqrt(n);
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace rcw
