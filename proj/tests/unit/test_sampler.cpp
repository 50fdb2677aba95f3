#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include <boost/math/distributions/chi_squared.hpp>

#include "ncomm/sampler.hpp"
#include "oracles.hpp"

using namespace ncomm;

namespace {
Graph path3() {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}};
  return Graph::from_edges(3, e);
}

/// Canonical restricted-growth form of a 1-based labelling.
std::vector<int> canonical(const std::vector<std::int32_t>& labels) {
  std::map<std::int32_t, int> seen;
  std::vector<int> out;
  for (auto l : labels) out.push_back(seen.emplace(l, static_cast<int>(seen.size())).first->second);
  return out;
}
}  // namespace

TEST(Sampler, NoOpBranchWhenSingleGroup) {
  std::vector<std::pair<NodeId, NodeId>> none;
  Graph g = Graph::from_edges(6, none);
  auto st = PartitionState::from_labels(g, std::vector<std::int32_t>(6, 1));
  Rng rng = make_stream_rng(1, 0);
  const double q2 = type2_probability(6, 1.0);
  const int draws = 200000;
  int noop = 0;
  for (int i = 0; i < draws; ++i) {
    auto mv = propose(st, q2, rng);
    if (!mv) ++noop;
    else EXPECT_EQ(mv->kind, MoveKind::type2);
  }
  const double p = 1.0 - 1.0 / 5.0;
  EXPECT_NEAR(noop / double(draws), p, 4 * std::sqrt(p * (1 - p) / draws));
}

TEST(Sampler, Type1ProposalProbabilityExample) {
  std::vector<std::pair<NodeId, NodeId>> none;
  Graph g = Graph::from_edges(4, none);
  auto st = PartitionState::from_labels(g, std::vector<std::int32_t>{1, 1, 2, 2});
  const double q2 = type2_probability(4, 1.0);
  EXPECT_NEAR(proposal_probability(st, st.type1_move(0, 1), q2), 1.0 / 6.0, 1e-15);
}

TEST(Sampler, ProposalFrequenciesMatchFormulas) {
  std::vector<std::pair<NodeId, NodeId>> none;
  Graph g = Graph::from_edges(6, none);
  auto st = PartitionState::from_labels(g, std::vector<std::int32_t>{1, 1, 1, 2, 2, 3});
  const double q2 = type2_probability(6, 1.0);
  Rng rng = make_stream_rng(12, 0);
  using Key = std::tuple<int, NodeId, GroupId>;
  std::map<Key, double> observed, expected;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    auto mv = propose(st, q2, rng);
    ASSERT_TRUE(mv.has_value());
    st.validate(*mv);
    observed[{static_cast<int>(mv->kind), mv->node, mv->to}] += 1;
  }
  double total = 0.0;
  for (NodeId i = 0; i < 6; ++i) {
    for (GroupId s = 0; s < st.num_groups(); ++s) {
      if (s == st.group_of(i)) continue;
      const double p = proposal_probability(st, st.type1_move(i, s), q2);
      expected[{0, i, s}] = p;
      total += p;
    }
    const double p = proposal_probability(st, st.type2_move(i), q2);
    expected[{1, i, st.num_groups()}] = p;
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  ASSERT_EQ(observed.size(), expected.size());
  double chi2 = 0.0;
  for (auto& [key, p] : expected) {
    const double e = p * draws;
    chi2 += (observed[key] - e) * (observed[key] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(Sampler, AcceptRule) {
  Rng rng = make_stream_rng(3, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(accept_move(0.0, rng));
  EXPECT_FALSE(accept_move(-INFINITY, rng));
  const int trials = 100000;
  int acc = 0;
  for (int i = 0; i < trials; ++i) acc += accept_move(std::log(0.5), rng);
  EXPECT_NEAR(acc / double(trials), 0.5, 3 * std::sqrt(0.25 / trials));
}

TEST(Sampler, ProposalRatioEqualsPartitionPriorRatio) {
  // At the level of partitions the prior carries an extra k!, the number of
  // labellings of a k-group partition.
  std::mt19937_64 rng(41);
  Rng pick = make_stream_rng(41, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 20);
    Graph g = oracle::random_multigraph(n, n, rng);
    auto st = PartitionState::from_labels(g, oracle::random_labels(n, 1 + static_cast<int>(rng() % n), rng));
    const double mu = 0.3 + uniform_unit(pick) * (n - 1.6);
    const PriorParams params{mu};
    const double q2 = type2_probability(n, mu);
    for (int step = 0; step < 300; ++step) {
      auto mv = propose(st, q2, pick);
      if (!mv) continue;
      if (mv->kind == MoveKind::type2 && mv->empties_source) continue;  // identity
      const double fwd = std::log(proposal_probability(st, *mv, q2));
      const double k = st.num_groups();
      const double prior_before = log_prior_working(st, params) + std::lgamma(k + 1);
      const double ratio = log_prior_ratio(st, *mv, params);
      auto after = st;
      after.apply(*mv);
      const Move back = mv->kind == MoveKind::type1 && !mv->empties_source
                            ? after.type1_move(mv->node, mv->from)
                        : mv->kind == MoveKind::type1 ? after.type2_move(mv->node)
                                                      : after.type1_move(mv->node, mv->from);
      const double bwd = std::log(proposal_probability(after, back, q2));
      const double prior_after = log_prior_working(after, params) + std::lgamma(after.num_groups() + 1.0);
      EXPECT_NEAR(fwd - bwd, prior_after - prior_before, 1e-10);
      EXPECT_NEAR(ratio - std::lgamma(k + 1) + std::lgamma(after.num_groups() + 1.0), fwd - bwd, 1e-10);
      st = std::move(after);
    }
  }
}

TEST(Sampler, ConfigValidation) {
  Graph g = path3();
  SamplerConfig c;
  c.sweeps = 10;
  c.burn_in_sweeps = 20;
  EXPECT_THROW(c.validate(3), ConfigError);
  c = {};
  c.chains = 0;
  EXPECT_THROW(c.validate(3), ConfigError);
  c = {};
  EXPECT_THROW(c.validate(2), ConfigError);
  c = {};
  c.mu = 2.5;
  EXPECT_THROW(c.validate(3), ConfigError);
  c = {};
  c.initial_labels = {1, 2};
  EXPECT_THROW(run_chain(g, c, 0), std::exception);
}

TEST(Sampler, TracesAndMap) {
  std::mt19937_64 rng(4);
  Graph g = oracle::random_multigraph(20, 50, rng);
  SamplerConfig c;
  c.sweeps = 300;
  c.burn_in_sweeps = 100;
  auto r = run_chain(g, c, 2);
  EXPECT_EQ(r.k_trace.size(), 300u);
  EXPECT_EQ(r.keff_trace.size(), 300u);
  EXPECT_EQ(r.log_posterior_trace.size(), 300u);
  for (std::size_t i = 0; i < r.k_trace.size(); ++i) {
    EXPECT_GE(r.k_trace[i], 1);
    EXPECT_LE(r.k_trace[i], 20);
    EXPECT_LE(r.keff_trace[i], r.k_trace[i] + 1e-12);
    EXPECT_GE(r.map_log_posterior, r.log_posterior_trace[i]);
  }
  EXPECT_EQ(r.steps, 300 * 20);
  EXPECT_GT(r.acceptance_rate, 0.0);
  EXPECT_LE(r.acceptance_rate, 1.0);
  // The stored MAP labels reproduce the stored MAP value.
  LikelihoodTables t(g);
  auto st = PartitionState::from_labels(g, r.map_labels);
  EXPECT_NEAR(log_posterior(t, st, PriorParams{}), r.map_log_posterior, 1e-9);
}

TEST(Sampler, DeterministicAcrossSchedules) {
  std::mt19937_64 rng(6);
  Graph g = oracle::random_multigraph(40, 90, rng);
  SamplerConfig c;
  c.sweeps = 200;
  c.burn_in_sweeps = 50;
  c.chains = 4;
  c.threads = 1;
  auto a = run_chains(g, c);
  c.threads = 4;
  auto b = run_chains(g, c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].k_trace, b[i].k_trace);
    EXPECT_EQ(a[i].map_labels, b[i].map_labels);
  }
  EXPECT_NE(a[0].k_trace, a[1].k_trace);
}

TEST(Sampler, PathGraphPosteriorOverK) {
  Graph g = path3();
  SamplerConfig c;
  c.sweeps = 500;
  c.burn_in_sweeps = 50;
  c.chains = 10;
  auto chains = run_chains(g, c);
  std::map<int, double> empirical;
  double count = 0;
  for (const auto& ch : chains)
    for (std::size_t i = ch.burn_in_sweeps; i < ch.k_trace.size(); ++i, ++count) empirical[ch.k_trace[i]] += 1;
  for (auto& [k, v] : empirical) v /= count;
  EXPECT_LT(oracle::total_variation(empirical, oracle::exact_k_posterior(g)), 0.05);
}

TEST(Sampler, StationaryOverPartitions) {
  std::mt19937_64 rng(19);
  Graph g = oracle::random_multigraph(5, 7, rng);
  // Exact posterior over set partitions, with the k! labelling factor.
  std::map<std::vector<int>, double> exact;
  double best = -INFINITY;
  for (const auto& part : oracle::set_partitions(5)) {
    const int k = *std::max_element(part.begin(), part.end()) + 1;
    std::vector<int> size(k, 0);
    for (int r : part) ++size[r];
    double lw = std::lgamma(k + 1.0) - k * std::log(3.0) + oracle::log_likelihood(g, part);
    for (int s : size) lw += std::lgamma(s + 1.0);
    exact[part] = lw;
    best = std::max(best, lw);
  }
  double z = 0.0;
  for (auto& [p, lw] : exact) z += (lw = std::exp(lw - best));
  for (auto& [p, w] : exact) w /= z;

  // Walk the chain directly so every sweep's partition is visible.
  LikelihoodTables tables(g);
  Rng chain_rng = make_stream_rng(77, 0);
  auto st = PartitionState::from_labels(g, std::vector<std::int32_t>{1, 2, 1, 2, 3});
  auto counts = st.make_counts();
  const double q2 = type2_probability(5, 1.0);
  std::map<std::vector<int>, double> seen;
  const int sweeps = 200000;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int step = 0; step < 5; ++step) {
      auto mv = propose(st, q2, chain_rng);
      if (!mv) continue;
      st.count_neighbors(mv->node, counts);
      if (accept_move(log_likelihood_ratio(tables, st, *mv, counts), chain_rng)) st.apply(*mv, counts);
      st.clear(counts);
    }
    seen[canonical(st.labels())] += 1.0 / sweeps;
  }
  double tv = 0.0;
  for (auto& [p, w] : exact) tv += std::abs(w - seen[p]);
  EXPECT_LT(tv / 2, 0.05);
}
