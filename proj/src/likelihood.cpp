#include "ncomm/likelihood.hpp"

#include <algorithm>

namespace ncomm {

namespace {

// Largest table of ln(p x + 1) kept for between-group size products; larger
// products fall back to log1p.
constexpr std::int64_t kBetweenTableCap = std::int64_t{1} << 22;

}  // namespace

LogFactorialTable::LogFactorialTable(std::int64_t max_arg) {
  table_.reserve(static_cast<std::size_t>(std::max<std::int64_t>(max_arg, 1)) + 1);
  table_.push_back(0.0);
  extend(std::max<std::int64_t>(max_arg, 1));
}

void LogFactorialTable::extend(std::int64_t x) {
  while (max_arg() < x) {
    auto next = static_cast<long double>(table_.size());
    running_ += std::log(next);
    table_.push_back(static_cast<double>(running_));
  }
}

LikelihoodTables::LikelihoodTables(const Graph& g)
    : p_(g.edge_density()),
      lnfact_(static_cast<std::int64_t>(g.num_nodes()) + 2 * g.num_edges() + 1) {
  const std::int64_t n = g.num_nodes();
  log_int_.resize(static_cast<std::size_t>(n) + 1);
  log_int_[0] = 0.0;  // only ever multiplied by a zero degree sum
  for (std::int64_t x = 1; x <= n; ++x) log_int_[x] = std::log(static_cast<double>(x));

  // n_r + n_s <= n bounds every between-group product by floor(n/2)*ceil(n/2).
  const std::int64_t max_product = (n / 2) * (n - n / 2);
  between_.resize(static_cast<std::size_t>(std::min(max_product, kBetweenTableCap)) + 1);
  for (std::size_t x = 0; x < between_.size(); ++x)
    between_[x] = std::log1p(p_ * static_cast<double>(x));

  within_.resize(static_cast<std::size_t>(n) + 1);
  for (std::int64_t s = 0; s <= n; ++s)
    within_[s] = std::log1p(0.5 * p_ * static_cast<double>(s) * static_cast<double>(s));
}

namespace {

inline double group_term(const LikelihoodTables& t, std::int64_t size, std::int64_t kappa) {
  if (size == 0) return 0.0;
  return static_cast<double>(kappa) * t.ln(size) + t.lnfact(size - 1) - t.lnfact(size + kappa - 1);
}

inline double between_term(const LikelihoodTables& t, std::int64_t edges, std::int64_t product) {
  return t.lnfact(edges) - static_cast<double>(edges + 1) * t.between(product);
}

inline double within_term(const LikelihoodTables& t, std::int64_t edges, std::int64_t size) {
  return t.lnfact(edges) - static_cast<double>(edges + 1) * t.within(size);
}

}  // namespace

double log_marginal_likelihood(const LikelihoodTables& tables, const PartitionState& state) {
  const GroupId k = state.num_groups();
  double total = 0.0;
  for (GroupId r = 0; r < k; ++r) {
    const std::int64_t nr = state.size(r);
    total += group_term(tables, nr, state.degree_sum(r));
    total += within_term(tables, state.edges(r, r), nr);
    for (GroupId s = r + 1; s < k; ++s)
      total += between_term(tables, state.edges(r, s), nr * state.size(s));
  }
  return total;
}

double log_marginal_likelihood(const Graph& g, const PartitionState& state) {
  return log_marginal_likelihood(LikelihoodTables(g), state);
}

double log_likelihood_ratio(const LikelihoodTables& tables, const PartitionState& state,
                            const Move& move, const NeighborCounts& counts) {
  if (move.kind == MoveKind::type2 && move.empties_source) return 0.0;

  const Graph& g = state.graph();
  const GroupId a = move.from;
  const GroupId b = move.to;
  const GroupId k = state.num_groups();
  const bool fresh = move.creates_group;

  const std::int64_t d = g.degree(move.node);
  const std::int64_t loops = g.self_loops(move.node);
  const std::int64_t na = state.size(a);
  const std::int64_t nb = fresh ? 0 : state.size(b);
  const std::int64_t ka = state.degree_sum(a);
  const std::int64_t kb = fresh ? 0 : state.degree_sum(b);
  const std::int64_t ea = counts[a];
  const std::int64_t eb = fresh ? 0 : counts[b];

  double delta = group_term(tables, na - 1, ka - d) - group_term(tables, na, ka) +
                 group_term(tables, nb + 1, kb + d) - group_term(tables, nb, kb);

  for (GroupId t = 0; t < k; ++t) {
    if (t == a || t == b) continue;
    const std::int64_t nt = state.size(t);
    const std::int64_t et = counts[t];
    const std::int64_t mat = state.edges(a, t);
    delta += between_term(tables, mat - et, (na - 1) * nt) - between_term(tables, mat, na * nt);
    if (fresh) {
      delta += between_term(tables, et, nt);
    } else {
      const std::int64_t mbt = state.edges(b, t);
      delta += between_term(tables, mbt + et, (nb + 1) * nt) - between_term(tables, mbt, nb * nt);
    }
  }

  const std::int64_t mab = fresh ? 0 : state.edges(a, b);
  const std::int64_t maa = state.edges(a, a);
  const std::int64_t mbb = fresh ? 0 : state.edges(b, b);
  delta += between_term(tables, mab + ea - eb, (na - 1) * (nb + 1)) -
           between_term(tables, mab, na * nb);
  delta += within_term(tables, maa - ea - loops, na - 1) - within_term(tables, maa, na);
  delta += within_term(tables, mbb + eb + loops, nb + 1) - within_term(tables, mbb, nb);
  return delta;
}

double log_likelihood_ratio(const Graph& g, const PartitionState& state, const Move& move) {
  state.validate(move);
  LikelihoodTables tables(g);
  NeighborCounts counts = state.make_counts();
  state.count_neighbors(move.node, counts);
  return log_likelihood_ratio(tables, state, move, counts);
}

}  // namespace ncomm
