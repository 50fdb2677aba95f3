#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ncomm/graph.hpp"
#include "ncomm/partition_state.hpp"
#include "ncomm/sampler.hpp"

namespace ncomm {

/// exp of the group-size entropy; lies in [1, k] and equals k only for
/// equal sizes.
double k_eff(std::span<const std::int64_t> sizes);

using Matrix = std::vector<std::vector<double>>;

/// Point estimate of the block connection rates: m_rs/(n_r n_s) off the
/// diagonal and 2 m_rr / n_r^2 on it.
Matrix omega_hat(const PartitionState& state);

struct MetaEdge {
  std::int32_t r;  // 1-based
  std::int32_t s;  // 1-based, r <= s
  std::int64_t weight;
};

struct MetaNetwork {
  std::vector<std::int64_t> sizes;
  /// Only pairs with at least one edge; r == s entries carry m_rr.
  std::vector<MetaEdge> edges;
};

MetaNetwork meta_network(const PartitionState& state);

struct KeffHistogram {
  double bin_start = 1.0;
  double bin_width = 0.1;
  std::vector<std::int64_t> counts;
};

struct ChainSummary {
  std::int32_t chain = 0;
  std::int32_t k_mode = 0;
  double acceptance_rate = 0.0;
  double steps_per_second = 0.0;
  std::int32_t initial_k = 0;
  double initial_mu = 0.0;
};

struct PosteriorSummary {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t samples = 0;
  std::map<std::int32_t, double> k_histogram;
  KeffHistogram keff_histogram;
  std::int32_t k_mode = 0;
  std::vector<ChainSummary> per_chain;
  std::vector<std::int32_t> map_labels;
  double map_log_posterior = 0.0;
  std::int32_t map_chain = -1;
  Matrix omega_hat;
  MetaNetwork meta_network;
};

struct SummaryOptions {
  double keff_bin_width = 0.1;
};

/// Most frequent k among the post-burn-in samples of one chain (ties go to
/// the smaller k).
std::int32_t chain_mode(const ChainResult& chain);

/// Pools post-burn-in samples of every chain. The MAP partition is the best
/// recorded state across chains and feeds omega_hat and the meta-network.
PosteriorSummary summarize(const Graph& graph, std::span<const ChainResult> chains,
                           const SummaryOptions& options = {});

}  // namespace ncomm
