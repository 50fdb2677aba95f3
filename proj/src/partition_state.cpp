#include "ncomm/partition_state.hpp"

#include <algorithm>
#include <string>

namespace ncomm {

PartitionState PartitionState::from_labels(const Graph& graph,
                                           std::span<const std::int32_t> labels) {
  const NodeId n = graph.num_nodes();
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("assignment length " + std::to_string(labels.size()) +
                                " does not match node count " + std::to_string(n));
  std::int32_t k = 0;
  for (auto l : labels) {
    if (l < 1) throw std::invalid_argument("group labels must be >= 1");
    k = std::max(k, l);
  }
  if (k > n) throw std::invalid_argument("more groups than nodes");

  PartitionState st;
  st.graph_ = &graph;
  st.group_.resize(n);
  st.position_.resize(n);
  st.ensure_capacity(k);
  for (NodeId i = 0; i < n; ++i) st.add_member(i, labels[i] - 1);
  st.k_ = k;
  for (GroupId r = 0; r < k; ++r)
    if (st.size_[r] == 0)
      throw std::invalid_argument("label " + std::to_string(r + 1) + " is used by no node");

  for (NodeId i = 0; i < n; ++i) {
    GroupId r = st.group_[i];
    st.edge_ref(r, r) += graph.self_loops(i);
    for (const auto& nb : graph.neighbors(i)) {
      if (nb.node < i) continue;
      GroupId s = st.group_[nb.node];
      st.edge_ref(r, s) += nb.multiplicity;
      if (r != s) st.edge_ref(s, r) += nb.multiplicity;
    }
  }
  return st;
}

std::vector<std::int32_t> PartitionState::labels() const {
  std::vector<std::int32_t> out(group_.size());
  for (std::size_t i = 0; i < group_.size(); ++i) out[i] = group_[i] + 1;
  return out;
}

void PartitionState::ensure_capacity(GroupId k) {
  if (static_cast<std::size_t>(k) <= stride_) return;
  std::size_t cap = std::max<std::size_t>({static_cast<std::size_t>(k), 2 * stride_, 8});
  cap = std::min<std::size_t>(cap, std::max<std::size_t>(k, group_.size()));
  std::vector<std::int64_t> grown(cap * cap, 0);
  for (std::size_t r = 0; r < stride_; ++r)
    std::copy_n(edges_.begin() + r * stride_, stride_, grown.begin() + r * cap);
  edges_ = std::move(grown);
  stride_ = cap;
  size_.resize(cap, 0);
  kappa_.resize(cap, 0);
  members_.resize(cap);
}

NeighborCounts PartitionState::make_counts() const {
  NeighborCounts c;
  c.count_.assign(group_.size() + 1, 0);
  return c;
}

void PartitionState::count_neighbors(NodeId node, NeighborCounts& out) const {
  if (out.count_.size() < group_.size() + 1) out.count_.assign(group_.size() + 1, 0);
  for (const auto& nb : graph_->neighbors(node)) {
    GroupId t = group_[nb.node];
    if (out.count_[t] == 0) out.touched_.push_back(t);
    out.count_[t] += nb.multiplicity;
  }
}

void PartitionState::clear(NeighborCounts& counts) const {
  for (GroupId t : counts.touched_) counts.count_[t] = 0;
  counts.touched_.clear();
}

Move PartitionState::type1_move(NodeId node, GroupId to) const {
  Move m;
  m.kind = MoveKind::type1;
  m.node = node;
  m.from = group_[node];
  m.to = to;
  m.empties_source = size_[m.from] == 1;
  return m;
}

Move PartitionState::type2_move(NodeId node) const {
  Move m;
  m.kind = MoveKind::type2;
  m.node = node;
  m.from = group_[node];
  m.to = k_;
  m.empties_source = size_[m.from] == 1;
  m.creates_group = !m.empties_source;
  return m;
}

void PartitionState::validate(const Move& move) const {
  if (move.node < 0 || move.node >= num_nodes()) throw StaleMoveError("move node out of range");
  if (group_[move.node] != move.from) throw StaleMoveError("move source is not the node's group");
  if (move.empties_source != (size_[move.from] == 1))
    throw StaleMoveError("move source-emptying flag is stale");
  if (move.kind == MoveKind::type1) {
    if (move.to < 0 || move.to >= k_ || move.to == move.from)
      throw StaleMoveError("type-1 move target is invalid");
    if (move.creates_group) throw StaleMoveError("type-1 moves never create groups");
  } else {
    if (move.to != k_) throw StaleMoveError("type-2 move must target the next free label");
    if (move.creates_group == move.empties_source)
      throw StaleMoveError("type-2 move creation flag is stale");
  }
}

void PartitionState::remove_member(NodeId i) {
  GroupId r = group_[i];
  auto& mem = members_[r];
  std::size_t pos = position_[i];
  NodeId last = mem.back();
  mem[pos] = last;
  position_[last] = pos;
  mem.pop_back();
  --size_[r];
  kappa_[r] -= graph_->degree(i);
}

void PartitionState::add_member(NodeId i, GroupId r) {
  group_[i] = r;
  position_[i] = members_[r].size();
  members_[r].push_back(i);
  ++size_[r];
  kappa_[r] += graph_->degree(i);
}

void PartitionState::relabel_group(GroupId from, GroupId to) {
  // `to` is empty, so its row and column are already zero.
  for (GroupId t = 0; t < k_; ++t) {
    if (t == from || t == to) continue;
    edge_ref(to, t) = edge_ref(t, to) = edges(from, t);
    edge_ref(from, t) = edge_ref(t, from) = 0;
  }
  edge_ref(to, to) = edges(from, from);
  edge_ref(from, from) = 0;
  edge_ref(from, to) = edge_ref(to, from) = 0;

  std::swap(members_[to], members_[from]);
  for (NodeId i : members_[to]) group_[i] = to;
  size_[to] = size_[from];
  kappa_[to] = kappa_[from];
  size_[from] = 0;
  kappa_[from] = 0;
}

void PartitionState::apply(const Move& move) {
  validate(move);
  NeighborCounts counts = make_counts();
  count_neighbors(move.node, counts);
  apply(move, counts);
}

void PartitionState::apply(const Move& move, const NeighborCounts& counts) {
  // A singleton moved into a fresh group leaves the partition unchanged:
  // the new group immediately takes over the vacated label.
  if (move.kind == MoveKind::type2 && move.empties_source) return;

  const GroupId a = move.from;
  const GroupId b = move.to;
  const NodeId i = move.node;
  if (move.creates_group) {
    ensure_capacity(k_ + 1);
    ++k_;
  }

  for (GroupId t : counts.touched()) {
    if (t == a || t == b) continue;
    std::int64_t e = counts[t];
    edge_ref(a, t) -= e;
    edge_ref(t, a) -= e;
    edge_ref(b, t) += e;
    edge_ref(t, b) += e;
  }
  const std::int64_t ea = counts[a];
  const std::int64_t eb = counts[b];
  const std::int64_t loops = graph_->self_loops(i);
  edge_ref(a, a) -= ea + loops;
  edge_ref(b, b) += eb + loops;
  edge_ref(a, b) += ea - eb;
  edge_ref(b, a) = edges(a, b);

  remove_member(i);
  add_member(i, b);

  if (size_[a] == 0) {
    GroupId last = k_ - 1;
    if (a != last) relabel_group(last, a);
    --k_;
  }
}

bool PartitionState::consistent() const {
  const NodeId n = num_nodes();
  std::vector<std::int32_t> lbl = labels();
  PartitionState fresh;
  try {
    fresh = from_labels(*graph_, lbl);
  } catch (const std::exception&) {
    return false;
  }
  if (fresh.k_ != k_) return false;
  for (GroupId r = 0; r < k_; ++r) {
    if (fresh.size_[r] != size_[r] || fresh.kappa_[r] != kappa_[r]) return false;
    if (members_[r].size() != static_cast<std::size_t>(size_[r])) return false;
    for (std::size_t p = 0; p < members_[r].size(); ++p) {
      NodeId i = members_[r][p];
      if (group_[i] != r || position_[i] != p) return false;
    }
    for (GroupId s = 0; s < k_; ++s)
      if (fresh.edges(r, s) != edges(r, s)) return false;
  }
  // Slots beyond k must be clean so that new groups start from zero.
  for (std::size_t r = k_; r < stride_; ++r) {
    if (size_[r] != 0 || kappa_[r] != 0) return false;
    for (std::size_t s = 0; s < stride_; ++s)
      if (edges_[r * stride_ + s] != 0 || edges_[s * stride_ + r] != 0) return false;
  }
  return n == static_cast<NodeId>(group_.size());
}

}  // namespace ncomm
