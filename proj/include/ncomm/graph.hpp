#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncomm {

using NodeId = std::int32_t;

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct Neighbor {
  NodeId node;
  std::int32_t multiplicity;
};

/// Undirected multigraph with self-loops, stored in CSR form.
///
/// Conventions: a self-loop at i adds 2 to d_i and 1 to m; repeated edges
/// accumulate into a single adjacency entry with multiplicity > 1. Self-loops
/// are kept out of the neighbor lists and counted separately.
class Graph {
public:
  Graph() = default;

  /// Builds from an edge list over dense ids 0..n-1. Nodes that appear in no
  /// edge are isolated but still counted in n.
  static Graph from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges,
                          std::vector<std::string> labels = {});

  NodeId num_nodes() const noexcept { return n_; }
  std::int64_t num_edges() const noexcept { return m_; }
  /// Mean edge probability 2m/n^2.
  double edge_density() const noexcept { return p_; }

  std::int64_t degree(NodeId i) const { return degree_[i]; }
  std::span<const std::int64_t> degrees() const noexcept { return degree_; }
  /// Number of self-loop edges at i (half of a_ii).
  std::int32_t self_loops(NodeId i) const { return self_loops_[i]; }
  std::span<const Neighbor> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  /// a_ij with the convention a_ii = twice the self-loop count.
  std::int64_t adjacency(NodeId i, NodeId j) const;

  /// Original token for node i (or its decimal id when built from ids).
  const std::string& label(NodeId i) const { return labels_[i]; }
  std::span<const std::string> labels() const noexcept { return labels_; }

  /// Every edge once, as (u, v) with u <= v, repeated by multiplicity.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

private:
  NodeId n_ = 0;
  std::int64_t m_ = 0;
  double p_ = 0.0;
  std::vector<std::int64_t> degree_;
  std::vector<std::int32_t> self_loops_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::string> labels_;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' and blank
/// lines are skipped; node tokens are arbitrary strings mapped to dense ids in
/// order of first appearance.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

/// Writes the graph in the same format load_edge_list reads, using the
/// original node labels. `header` lines are emitted as '#' comments.
void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::string> header = {});

std::int64_t degree_sum(const Graph& g, std::span<const NodeId> nodes);

}  // namespace ncomm
