#include <gtest/gtest.h>

#include <cmath>

#include "ncomm/analysis.hpp"
#include "ncomm/generators.hpp"

using namespace ncomm;

namespace {
ChainResult constant_chain(std::int32_t id, std::int32_t k, int sweeps, int burn_in) {
  ChainResult c;
  c.chain = id;
  c.burn_in_sweeps = burn_in;
  c.k_trace.assign(sweeps, k);
  c.keff_trace.assign(sweeps, static_cast<double>(k));
  c.log_posterior_trace.assign(sweeps, -10.0 * id);
  c.map_log_posterior = -10.0 * id;
  return c;
}
}  // namespace

TEST(Analysis, KeffExamples) {
  std::vector<std::int64_t> equal{5, 5, 5, 5}, one{7}, mixed{2, 1, 1};
  EXPECT_NEAR(k_eff(equal), 4.0, 1e-12);
  EXPECT_NEAR(k_eff(one), 1.0, 1e-15);
  EXPECT_NEAR(k_eff(mixed), std::pow(2.0, 1.5), 1e-12);
  std::vector<std::int64_t> empty;
  EXPECT_THROW(k_eff(empty), std::invalid_argument);
  std::vector<std::int64_t> uneven{9, 1, 1, 5};
  EXPECT_LT(k_eff(uneven), 4.0);
}

TEST(Analysis, SummarizeConstantChain) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {2, 3}};
  Graph g = Graph::from_edges(4, e);
  auto c = constant_chain(0, 3, 20, 5);
  c.map_labels = {1, 2, 3, 3};
  std::vector<ChainResult> chains{c};
  auto s = summarize(g, chains);
  EXPECT_EQ(s.samples, 15);
  ASSERT_EQ(s.k_histogram.size(), 1u);
  EXPECT_DOUBLE_EQ(s.k_histogram.at(3), 1.0);
  EXPECT_EQ(s.k_mode, 3);
}

TEST(Analysis, TieGoesToSmallerK) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  Graph g = Graph::from_edges(5, e);
  auto a = constant_chain(0, 2, 10, 0);
  a.map_labels = {1, 1, 2, 2, 2};
  auto b = constant_chain(1, 4, 10, 0);
  b.map_labels = {1, 2, 3, 4, 4};
  std::vector<ChainResult> chains{b, a};
  auto s = summarize(g, chains);
  EXPECT_DOUBLE_EQ(s.k_histogram.at(2), 0.5);
  EXPECT_DOUBLE_EQ(s.k_histogram.at(4), 0.5);
  EXPECT_EQ(s.k_mode, 2);
  EXPECT_EQ(s.map_chain, 0);  // chain a has the higher posterior
  EXPECT_EQ(s.map_labels, a.map_labels);
  EXPECT_EQ(s.per_chain.size(), 2u);
}

TEST(Analysis, AllBurnInIsAnError) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
  Graph g = Graph::from_edges(3, e);
  auto c = constant_chain(0, 1, 10, 10);
  c.map_labels = {1, 1, 1};
  std::vector<ChainResult> chains{c};
  EXPECT_THROW(summarize(g, chains), std::invalid_argument);
  std::vector<ChainResult> none;
  EXPECT_THROW(summarize(g, none), std::invalid_argument);
}

TEST(Analysis, KeffHistogramBins) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
  Graph g = Graph::from_edges(4, e);
  ChainResult c;
  c.k_trace = {1, 2, 2, 3};
  c.keff_trace = {1.0, 1.95, 2.0, 2.7};
  c.log_posterior_trace = {0, 0, 0, 0};
  c.map_labels = {1, 1, 1, 1};
  c.map_log_posterior = 0;
  std::vector<ChainResult> chains{c};
  auto s = summarize(g, chains);
  const auto& h = s.keff_histogram;
  EXPECT_DOUBLE_EQ(h.bin_width, 0.1);
  std::int64_t total = 0;
  for (auto v : h.counts) total += v;
  EXPECT_EQ(total, 4);
  EXPECT_EQ(h.counts[0], 1);   // 1.0
  EXPECT_EQ(h.counts[9], 1);   // 1.95
  EXPECT_EQ(h.counts[10], 1);  // 2.0
  EXPECT_EQ(h.counts[17], 1);  // 2.7
  double norm = 0.0;
  for (auto [k, p] : s.k_histogram) norm += p;
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(Analysis, OmegaHatExamples) {
  Graph empty = Graph::from_edges(4, {});
  auto st0 = PartitionState::from_labels(empty, std::vector<std::int32_t>{1, 1, 2, 2});
  for (const auto& row : omega_hat(st0))
    for (double v : row) EXPECT_EQ(v, 0.0);

  std::vector<std::pair<NodeId, NodeId>> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Graph g = Graph::from_edges(4, k4);
  auto st = PartitionState::from_labels(g, std::vector<std::int32_t>{1, 1, 1, 1});
  auto w = omega_hat(st);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_DOUBLE_EQ(w[0][0], 0.75);
}

TEST(Analysis, OmegaHatReproducesEdgeCount) {
  Rng rng = make_stream_rng(9, 0);
  auto gen = generate_sbm(planted_partition(300, 3, 10.0, 0.8), rng);
  auto st = PartitionState::from_labels(gen.graph, gen.labels);
  auto w = omega_hat(st);
  double total = 0.0;
  for (GroupId r = 0; r < 3; ++r) {
    const double nr = static_cast<double>(st.size(r));
    total += w[r][r] * nr * nr / 2.0;
    for (GroupId s = r + 1; s < 3; ++s) total += w[r][s] * nr * static_cast<double>(st.size(s));
  }
  EXPECT_NEAR(total, static_cast<double>(gen.graph.num_edges()), 1e-9);
}

TEST(Analysis, OmegaHatWithinPoissonError) {
  Rng rng = make_stream_rng(10, 0);
  SbmSpec spec = planted_partition(2000, 3, 20.0, 0.8);
  auto gen = generate_sbm(spec, rng);
  auto st = PartitionState::from_labels(gen.graph, gen.labels);
  auto w = omega_hat(st);
  for (GroupId r = 0; r < 3; ++r)
    for (GroupId s = 0; s < 3; ++s) {
      const double nr = static_cast<double>(spec.sizes[r]), ns = static_cast<double>(spec.sizes[s]);
      const double sigma = r == s ? 2.0 * std::sqrt(spec.omega[r][r] * nr * nr / 2.0) / (nr * nr)
                                  : std::sqrt(spec.omega[r][s] * nr * ns) / (nr * ns);
      EXPECT_NEAR(w[r][s], spec.omega[r][s], 3 * sigma) << r << "," << s;
    }
}

TEST(Analysis, MetaNetworkExamples) {
  std::vector<std::pair<NodeId, NodeId>> tri{{0, 1}, {1, 2}, {0, 2}};
  Graph g = Graph::from_edges(3, tri);
  auto one = meta_network(PartitionState::from_labels(g, std::vector<std::int32_t>{1, 1, 1}));
  ASSERT_EQ(one.sizes, std::vector<std::int64_t>{3});
  ASSERT_EQ(one.edges.size(), 1u);
  EXPECT_EQ(one.edges[0].weight, 3);

  auto net = meta_network(PartitionState::from_labels(g, std::vector<std::int32_t>{1, 1, 2}));
  EXPECT_EQ(net.sizes, (std::vector<std::int64_t>{2, 1}));
  ASSERT_EQ(net.edges.size(), 2u);
  EXPECT_EQ(net.edges[0].r, 1);
  EXPECT_EQ(net.edges[0].s, 1);
  EXPECT_EQ(net.edges[0].weight, 1);
  EXPECT_EQ(net.edges[1].r, 1);
  EXPECT_EQ(net.edges[1].s, 2);
  EXPECT_EQ(net.edges[1].weight, 2);

  std::vector<std::pair<NodeId, NodeId>> split{{0, 1}, {2, 3}};
  Graph h = Graph::from_edges(4, split);
  auto apart = meta_network(PartitionState::from_labels(h, std::vector<std::int32_t>{1, 1, 2, 2}));
  for (const auto& e : apart.edges) EXPECT_EQ(e.r, e.s);
}
