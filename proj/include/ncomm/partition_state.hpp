#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ncomm/graph.hpp"
#include "ncomm/rng.hpp"

namespace ncomm {

/// Group index, 0-based inside the library. Serialized labels are 1-based.
using GroupId = std::int32_t;

enum class MoveKind { type1, type2 };

/// Relocation of one node. For type-2 moves `to` is the index of the group
/// about to be created (always the current group count).
struct Move {
  MoveKind kind = MoveKind::type1;
  NodeId node = 0;
  GroupId from = 0;
  GroupId to = 0;
  bool empties_source = false;
  bool creates_group = false;
};

class StaleMoveError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Per-group edge counts from one node to the rest of the partition. Sized
/// to the group capacity and cleared lazily through the touched list.
class NeighborCounts {
public:
  std::int64_t operator[](GroupId r) const { return count_[r]; }
  std::span<const GroupId> touched() const noexcept { return touched_; }

private:
  friend class PartitionState;
  std::vector<std::int64_t> count_;
  std::vector<GroupId> touched_;
};

/// Group assignment plus the sufficient statistics n_r, kappa_r and m_rs,
/// kept exact under single-node moves.
///
/// Labels run contiguously over 0..k-1 at all times and no group is ever
/// empty. m_rr counts each within-group edge once; m_rs for r != s counts
/// each edge between the groups once. The state keeps a non-owning pointer
/// to its graph, which must outlive it.
class PartitionState {
public:
  /// `labels` holds one 1-based label per node; the label set must be
  /// exactly 1..k.
  static PartitionState from_labels(const Graph& graph, std::span<const std::int32_t> labels);

  const Graph& graph() const noexcept { return *graph_; }
  NodeId num_nodes() const noexcept { return static_cast<NodeId>(group_.size()); }
  GroupId num_groups() const noexcept { return k_; }

  GroupId group_of(NodeId i) const { return group_[i]; }
  std::int64_t size(GroupId r) const { return size_[r]; }
  std::int64_t degree_sum(GroupId r) const { return kappa_[r]; }
  std::int64_t edges(GroupId r, GroupId s) const {
    return edges_[static_cast<std::size_t>(r) * stride_ + s];
  }
  std::span<const NodeId> members(GroupId r) const { return members_[r]; }
  std::vector<std::int64_t> sizes() const { return {size_.begin(), size_.begin() + k_}; }

  /// 1-based labels, one per node.
  std::vector<std::int32_t> labels() const;

  NodeId random_member(GroupId r, Rng& rng) const {
    const auto& mem = members_[r];
    return mem[uniform_index(rng, mem.size())];
  }

  Move type1_move(NodeId node, GroupId to) const;
  Move type2_move(NodeId node) const;

  /// Throws StaleMoveError when the move does not describe the current state.
  void validate(const Move& move) const;

  /// Fills `out` with sum of a_ij over j != node, grouped by g_j.
  void count_neighbors(NodeId node, NeighborCounts& out) const;
  void clear(NeighborCounts& counts) const;
  NeighborCounts make_counts() const;

  void apply(const Move& move);
  void apply(const Move& move, const NeighborCounts& counts);

  /// Recomputes every statistic from (graph, g) and compares exactly.
  bool consistent() const;

private:
  PartitionState() = default;
  void ensure_capacity(GroupId k);
  std::int64_t& edge_ref(GroupId r, GroupId s) {
    return edges_[static_cast<std::size_t>(r) * stride_ + s];
  }
  void remove_member(NodeId i);
  void add_member(NodeId i, GroupId r);
  void relabel_group(GroupId from, GroupId to);

  const Graph* graph_ = nullptr;
  GroupId k_ = 0;
  std::size_t stride_ = 0;
  std::vector<GroupId> group_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<NodeId>> members_;
  std::vector<std::int64_t> size_;
  std::vector<std::int64_t> kappa_;
  std::vector<std::int64_t> edges_;
};

}  // namespace ncomm
