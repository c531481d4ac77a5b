#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rcw/distributions.hpp"
#include "rcw/ring_sampler.hpp"
#include "rcw/topology.hpp"

namespace rcw {

using Topology = std::variant<Network, RingNetwork>;

// Network description, one `key value...` per line, `#` starts a comment.
//
//   type grid             radius R
//   type uniform_rings    sizes n0 n1 ...; delta d0 d1 ...; gamma g1 ...; distance2 true|false
//   type geometric        rings R; per_ring N; beta B; seed S
//   type edge_list        nodes N (optional); `edges` then `u v` lines;
//                         `weights` then `node weight` lines (default weight 1)
Topology parse_network(std::istream& in);
Topology load_network(const std::filesystem::path& path);

enum class DistKind { Uniform, Pid, Explicit };

struct DistSpec {
  DistKind kind = DistKind::Uniform;
  double p0 = 0.0;        // pid only
  std::vector<double> p;  // explicit only
};

// Distribution file: `kind uniform|pid|explicit`, `p0 X`, `p x0 x1 ...`.
DistSpec parse_distribution(std::istream& in);
DistSpec load_distribution(const std::filesystem::path& path);

// `uni`, `pid` (p0 from `pid_p0`) or a path to a distribution file.
DistSpec distribution_from_arg(const std::string& arg, double pid_p0 = 0.0);

DistanceDistribution resolve(const DistSpec& spec, std::span<const std::size_t> ring_sizes);

// Policy file: `s s1 s2 ...` (whitespace or newline separated).
HopPolicy parse_policy(std::istream& in);
HopPolicy load_policy(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace rcw
