#include "rcw/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rcw {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line.substr(0, line.find('#')));
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

template <class T>
T number(const std::string& text, std::size_t line_no) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return value;
}

bool boolean(const std::string& text, std::size_t line_no) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected a boolean, got '" + text + "'");
}

struct KeyValues {
  std::map<std::string, std::pair<std::vector<std::string>, std::size_t>> entries;

  const std::vector<std::string>* find(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.first;
  }
  std::size_t line(const std::string& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.second;
  }
  const std::vector<std::string>& require(const std::string& key) const {
    const auto* v = find(key);
    if (!v || v->empty()) fail(ErrorCode::ParseError, "missing key '" + key + "'");
    return *v;
  }
  template <class T>
  T scalar(const std::string& key) const {
    const auto& v = require(key);
    if (v.size() != 1) fail(ErrorCode::ParseError, "key '" + key + "' takes one value");
    return number<T>(v[0], line(key));
  }
  template <class T>
  std::vector<T> list(const std::string& key) const {
    std::vector<T> out;
    for (const auto& t : require(key)) out.push_back(number<T>(t, line(key)));
    return out;
  }
};

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  auto in = open(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology parse_network(std::istream& in) {
  KeyValues kv;
  std::vector<Edge> edges;
  std::map<NodeId, double> weights;
  enum class Section { Keys, Edges, Weights } section = Section::Keys;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() == 1 && t[0] == "edges") {
      section = Section::Edges;
      continue;
    }
    if (t.size() == 1 && t[0] == "weights") {
      section = Section::Weights;
      continue;
    }
    const bool numeric = !t[0].empty() && (std::isdigit(static_cast<unsigned char>(t[0][0])) != 0);
    if (section == Section::Edges && numeric) {
      if (t.size() != 2) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'u v'");
      edges.emplace_back(number<NodeId>(t[0], line_no), number<NodeId>(t[1], line_no));
      continue;
    }
    if (section == Section::Weights && numeric) {
      if (t.size() != 2) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'node weight'");
      weights[number<NodeId>(t[0], line_no)] = number<double>(t[1], line_no);
      continue;
    }
    section = Section::Keys;
    const std::string key = t[0];
    t.erase(t.begin());
    if (kv.entries.count(key)) fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv.entries[key] = {std::move(t), line_no};
  }

  const auto& type = kv.require("type");
  if (type.size() != 1) fail(ErrorCode::ParseError, "type takes one value");
  if (type[0] == "grid") {
    return build_grid(GridSpec{kv.scalar<int>("radius")});
  }
  if (type[0] == "uniform_rings") {
    const auto sizes = kv.list<std::size_t>("sizes");
    const auto delta = kv.list<std::size_t>("delta");
    const auto gamma = kv.list<std::size_t>("gamma");
    bool d2 = false;
    if (const auto* v = kv.find("distance2")) {
      if (v->size() != 1) fail(ErrorCode::ParseError, "distance2 takes one value");
      d2 = boolean((*v)[0], kv.line("distance2"));
    }
    return build_uniform_rings(sizes, delta, gamma, d2);
  }
  if (type[0] == "geometric") {
    GeometricDeployment dep;
    dep.rings = kv.scalar<std::uint32_t>("rings");
    dep.per_ring = kv.scalar<std::uint32_t>("per_ring");
    dep.beta = kv.scalar<double>("beta");
    dep.seed = kv.find("seed") ? kv.scalar<std::uint64_t>("seed") : 0;
    return build_geometric(dep);
  }
  if (type[0] == "edge_list") {
    std::size_t n = 0;
    if (kv.find("nodes")) {
      n = kv.scalar<std::size_t>("nodes");
    } else {
      for (const auto& [u, v] : edges) n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
      for (const auto& [x, w] : weights) n = std::max<std::size_t>(n, x + std::size_t{1});
      n = std::max<std::size_t>(n, 1);
    }
    std::vector<double> w(n, 1.0);
    for (const auto& [x, value] : weights) {
      if (x >= n) fail(ErrorCode::ParseError, "weight for node " + std::to_string(x) + " out of range");
      w[x] = value;
    }
    return Network(n, edges, std::move(w));
  }
  fail(ErrorCode::ParseError, "unknown network type '" + type[0] + "'");
}

Topology load_network(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_network(in);
}

DistSpec parse_distribution(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = tokens_of(line);
    if (t.empty()) continue;
    const std::string key = t[0];
    t.erase(t.begin());
    auto& slot = kv.entries[key];
    slot.second = line_no;
    slot.first.insert(slot.first.end(), t.begin(), t.end());  // `p` may span lines
  }
  DistSpec spec;
  const auto& kind = kv.require("kind");
  if (kind[0] == "uniform" || kind[0] == "uni") {
    spec.kind = DistKind::Uniform;
  } else if (kind[0] == "pid") {
    spec.kind = DistKind::Pid;
    spec.p0 = kv.find("p0") ? kv.scalar<double>("p0") : 0.0;
  } else if (kind[0] == "explicit") {
    spec.kind = DistKind::Explicit;
    spec.p = kv.list<double>("p");
  } else {
    fail(ErrorCode::ParseError, "unknown distribution kind '" + kind[0] + "'");
  }
  return spec;
}

DistSpec load_distribution(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_distribution(in);
}

DistSpec distribution_from_arg(const std::string& arg, double pid_p0) {
  if (arg == "uni" || arg == "uniform") return {DistKind::Uniform, 0.0, {}};
  if (arg == "pid") return {DistKind::Pid, pid_p0, {}};
  return load_distribution(arg);
}

DistanceDistribution resolve(const DistSpec& spec, std::span<const std::size_t> ring_sizes) {
  switch (spec.kind) {
    case DistKind::Uniform: return uniform(ring_sizes);
    case DistKind::Pid: return inverse_distance(ring_sizes, spec.p0);
    case DistKind::Explicit: {
      DistanceDistribution d(spec.p);
      require_walkable(d, ring_sizes);
      return d;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown distribution kind");
}

HopPolicy parse_policy(std::istream& in) {
  HopPolicy policy;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = tokens_of(line);
    if (t.empty()) continue;
    std::size_t first = 0;
    if (t[0] == "s") first = 1;
    for (std::size_t i = first; i < t.size(); ++i) policy.s.push_back(number<double>(t[i], line_no));
  }
  return policy;
}

HopPolicy load_policy(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_policy(in);
}

}  // namespace rcw
