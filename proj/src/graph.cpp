#include "ncomm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ncomm {

Graph Graph::from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<std::string> labels) {
  if (n <= 0) throw std::invalid_argument("graph must have at least one node");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("label count does not match node count");

  Graph g;
  g.n_ = n;
  g.degree_.assign(n, 0);
  g.self_loops_.assign(n, 0);

  // Neighbor lists are built from sorted half-edges so that repeated edges
  // collapse into one entry with a multiplicity.
  std::vector<std::pair<NodeId, NodeId>> half;
  half.reserve(2 * edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    ++g.m_;
    g.degree_[u] += 1;
    g.degree_[v] += 1;
    if (u == v) {
      ++g.self_loops_[u];
    } else {
      half.emplace_back(u, v);
      half.emplace_back(v, u);
    }
  }
  std::sort(half.begin(), half.end());

  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t idx = 0; idx < half.size();) {
    auto [u, v] = half[idx];
    std::size_t end = idx;
    while (end < half.size() && half[end] == half[idx]) ++end;
    g.adjacency_.push_back({v, static_cast<std::int32_t>(end - idx)});
    ++g.offsets_[u + 1];
    idx = end;
  }
  for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.p_ = 2.0 * static_cast<double>(g.m_) / (static_cast<double>(n) * static_cast<double>(n));

  if (labels.empty()) {
    labels.reserve(n);
    for (NodeId i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  g.labels_ = std::move(labels);
  return g;
}

std::int64_t Graph::adjacency(NodeId i, NodeId j) const {
  if (i == j) return 2 * static_cast<std::int64_t>(self_loops_[i]);
  auto nbrs = neighbors(i);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                             [](const Neighbor& a, NodeId id) { return a.node < id; });
  return (it != nbrs.end() && it->node == j) ? it->multiplicity : 0;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (NodeId i = 0; i < n_; ++i) {
    for (std::int32_t s = 0; s < self_loops_[i]; ++s) out.emplace_back(i, i);
    for (const auto& nb : neighbors(i)) {
      if (nb.node < i) continue;
      for (std::int32_t c = 0; c < nb.multiplicity; ++c) out.emplace_back(i, nb.node);
    }
  }
  return out;
}

Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<NodeId, NodeId>> edges;

  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(tok);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    if (b.empty() || (fields >> extra))
      throw ParseError(lineno, "expected exactly two node tokens");
    NodeId u = intern(a);
    NodeId v = intern(b);
    edges.emplace_back(u, v);
  }
  if (labels.empty()) throw ParseError(lineno, "edge list contains no edges");
  const auto n = static_cast<NodeId>(labels.size());
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> header) {
  for (const auto& h : header) out << "# " << h << '\n';
  for (auto [u, v] : g.edge_list()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

std::int64_t degree_sum(const Graph& g, std::span<const NodeId> nodes) {
  std::int64_t total = 0;
  for (NodeId i : nodes) {
    if (i < 0 || i >= g.num_nodes()) throw std::out_of_range("node id out of range");
    total += g.degree(i);
  }
  return total;
}

}  // namespace ncomm
