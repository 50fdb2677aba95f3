#include "ncomm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncomm {

double k_eff(std::span<const std::int64_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("k_eff needs at least one group");
  std::int64_t n = 0;
  for (auto s : sizes) {
    if (s < 1) throw std::invalid_argument("k_eff needs non-empty groups");
    n += s;
  }
  const double total = static_cast<double>(n);
  double entropy = 0.0;
  for (auto s : sizes) {
    const double f = static_cast<double>(s) / total;
    entropy -= f * std::log(f);
  }
  // Rounding can push exp(S) a hair past k for equal sizes.
  return std::min(std::exp(entropy), static_cast<double>(sizes.size()));
}

Matrix omega_hat(const PartitionState& state) {
  const GroupId k = state.num_groups();
  Matrix w(k, std::vector<double>(k, 0.0));
  for (GroupId r = 0; r < k; ++r) {
    const double nr = static_cast<double>(state.size(r));
    w[r][r] = 2.0 * static_cast<double>(state.edges(r, r)) / (nr * nr);
    for (GroupId s = r + 1; s < k; ++s) {
      const double ns = static_cast<double>(state.size(s));
      w[r][s] = w[s][r] = static_cast<double>(state.edges(r, s)) / (nr * ns);
    }
  }
  return w;
}

MetaNetwork meta_network(const PartitionState& state) {
  MetaNetwork net;
  const GroupId k = state.num_groups();
  net.sizes = state.sizes();
  for (GroupId r = 0; r < k; ++r)
    for (GroupId s = r; s < k; ++s)
      if (auto w = state.edges(r, s); w > 0) net.edges.push_back({r + 1, s + 1, w});
  return net;
}

namespace {

std::int32_t mode_of(const std::map<std::int32_t, std::int64_t>& counts) {
  std::int32_t best = 0;
  std::int64_t best_count = -1;
  for (auto [k, c] : counts) {  // ascending k, so strict > keeps the smaller k on ties
    if (c > best_count) {
      best = k;
      best_count = c;
    }
  }
  return best;
}

}  // namespace

std::int32_t chain_mode(const ChainResult& chain) {
  std::map<std::int32_t, std::int64_t> counts;
  for (std::size_t t = static_cast<std::size_t>(chain.burn_in_sweeps); t < chain.k_trace.size(); ++t)
    ++counts[chain.k_trace[t]];
  if (counts.empty()) throw std::invalid_argument("chain has no post-burn-in samples");
  return mode_of(counts);
}

PosteriorSummary summarize(const Graph& graph, std::span<const ChainResult> chains,
                           const SummaryOptions& options) {
  if (chains.empty()) throw std::invalid_argument("no chains to summarize");
  if (!(options.keff_bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");

  PosteriorSummary out;
  out.n = graph.num_nodes();
  out.m = graph.num_edges();

  std::map<std::int32_t, std::int64_t> k_counts;
  std::vector<double> keff_samples;
  std::int32_t k_max = 1;
  const ChainResult* best = nullptr;
  for (const auto& c : chains) {
    const auto first = static_cast<std::size_t>(c.burn_in_sweeps);
    for (std::size_t t = first; t < c.k_trace.size(); ++t) {
      ++k_counts[c.k_trace[t]];
      keff_samples.push_back(c.keff_trace[t]);
      k_max = std::max(k_max, c.k_trace[t]);
    }
    if (!c.map_labels.empty() && (!best || c.map_log_posterior > best->map_log_posterior))
      best = &c;
  }
  if (keff_samples.empty()) throw std::invalid_argument("every sample falls inside the burn-in");

  out.samples = static_cast<std::int64_t>(keff_samples.size());
  for (auto [k, c] : k_counts)
    out.k_histogram[k] = static_cast<double>(c) / static_cast<double>(out.samples);
  out.k_mode = mode_of(k_counts);

  auto& hist = out.keff_histogram;
  hist.bin_width = options.keff_bin_width;
  const double slack = 1e-9;
  const auto bins =
      static_cast<std::size_t>(std::floor((k_max - 1.0) / hist.bin_width + slack)) + 1;
  hist.counts.assign(bins, 0);
  for (double v : keff_samples) {
    auto idx = static_cast<std::size_t>(std::max(0.0, std::floor((v - 1.0) / hist.bin_width + slack)));
    ++hist.counts[std::min(idx, bins - 1)];
  }

  for (const auto& c : chains) {
    ChainSummary cs;
    cs.chain = c.chain;
    cs.k_mode = chain_mode(c);
    cs.acceptance_rate = c.acceptance_rate;
    cs.steps_per_second = c.steps_per_second;
    cs.initial_k = c.initial_k;
    cs.initial_mu = c.initial_mu;
    out.per_chain.push_back(cs);
  }

  if (best) {
    out.map_labels = best->map_labels;
    out.map_log_posterior = best->map_log_posterior;
    out.map_chain = best->chain;
    auto state = PartitionState::from_labels(graph, out.map_labels);
    out.omega_hat = omega_hat(state);
    out.meta_network = meta_network(state);
  }
  return out;
}

}  // namespace ncomm
