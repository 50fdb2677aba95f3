#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncomm/graph.hpp"
#include "ncomm/likelihood.hpp"
#include "ncomm/partition_state.hpp"
#include "ncomm/prior.hpp"
#include "ncomm/rng.hpp"

namespace ncomm {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct SamplerConfig {
  /// One sweep is n elementary steps.
  std::int64_t sweeps = 2000;
  std::int64_t burn_in_sweeps = 1000;
  std::int32_t chains = 10;
  /// Prior parameter used by the chain itself.
  double mu = 1.0;
  std::uint64_t seed = 1;
  bool record_map = true;
  /// Upper end of the uniform range the initial-partition mu is drawn from
  /// (clamped to n-2 on small graphs).
  double init_mu_max = 100.0;
  /// When non-empty, every chain starts here (1-based labels) instead of a
  /// random draw from the prior.
  std::vector<std::int32_t> initial_labels;
  /// Worker threads for multi-chain runs; 0 picks the hardware concurrency.
  std::int32_t threads = 0;

  /// Throws ConfigError on any violation.
  void validate(std::int64_t n) const;
};

struct ChainResult {
  std::int32_t chain = 0;
  std::int64_t burn_in_sweeps = 0;
  /// One entry per sweep, including burn-in.
  std::vector<std::int32_t> k_trace;
  std::vector<double> keff_trace;
  std::vector<double> log_posterior_trace;
  /// Best recorded state by ln P(A|g,k) + ln P(g,k); empty if not tracked.
  std::vector<std::int32_t> map_labels;
  double map_log_posterior = -INFINITY;
  double initial_mu = 0.0;
  std::int32_t initial_k = 0;
  std::int64_t steps = 0;
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  /// accepted / proposed; no-op steps are excluded from both.
  double acceptance_rate = 0.0;
  double steps_per_second = 0.0;
};

/// Probability of proposing a type-2 move: q = mu/(n-1), so 1/(n-1) at mu = 1.
inline double type2_probability(std::int64_t n, double mu) { return mu / static_cast<double>(n - 1); }

/// One proposal. Returns nullopt for the "do nothing" branch (a type-1 draw
/// while k = 1). Type-2 draws pick an ordered pair of distinct labels from
/// 1..k+1; the new group always takes label k+1 and the node comes from the
/// group the pair designates, which is uniform over the k existing groups.
std::optional<Move> propose(const PartitionState& state, double type2_prob, Rng& rng);

/// Probability that propose() yields this partition change.
double proposal_probability(const PartitionState& state, const Move& move, double type2_prob);

/// Accepts with probability min(1, exp(delta_log_likelihood)).
bool accept_move(double delta_log_likelihood, Rng& rng);

double log_posterior(const LikelihoodTables& tables, const PartitionState& state,
                     const PriorParams& prior);

/// Runs chain `chain_index`; deterministic given (config.seed, chain_index).
ChainResult run_chain(const Graph& graph, const LikelihoodTables& tables,
                      const SamplerConfig& config, std::int32_t chain_index);
ChainResult run_chain(const Graph& graph, const SamplerConfig& config, std::int32_t chain_index);

/// Runs config.chains independent chains, concurrently when allowed.
std::vector<ChainResult> run_chains(const Graph& graph, const SamplerConfig& config);

}  // namespace ncomm
