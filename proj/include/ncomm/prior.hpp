#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncomm/partition_state.hpp"
#include "ncomm/rng.hpp"

namespace ncomm {

/// Parameters of the queueing-process prior over partitions.
///
/// `mu` is the expected number of groups started after the first one, so
/// each node after the first opens a new group with probability
/// q = mu / (n - 1). Requires 0 < mu < n - 1.
struct PriorParams {
  double mu = 1.0;

  double q(std::int64_t n) const { return mu / static_cast<double>(n - 1); }
  /// ln((n - 1 - mu) / mu), the per-group penalty of the working prior;
  /// equals ln(n - 2) at mu = 1.
  double log_group_penalty(std::int64_t n) const;
  void validate(std::int64_t n) const;
};

/// ln P(g,k) up to a g,k-independent constant: -k ln((n-1-mu)/mu) + sum ln n_r!.
double log_prior_working(const PartitionState& state, const PriorParams& params = {});
double log_prior_working(std::int64_t n, std::span<const std::int64_t> sizes,
                         const PriorParams& params = {});

/// Closed-form ln P(g',k')/P(g,k) for a move, from the sizes before it.
///   type 1, source keeps nodes:   ln(n_s' / n_r)
///   type 1, source empties:       ln(penalty * n_s')
///   type 2, creates a group:      -ln(penalty * n_r)
///   type 2, singleton source:     0
double log_prior_ratio(const PartitionState& state, const Move& move,
                       const PriorParams& params = {});

/// Draws (labels, k) from the queueing process: nodes in uniformly random
/// order, each after the first starting the next group with probability q.
/// Labels are 1-based.
struct QueueingDraw {
  std::vector<std::int32_t> labels;
  std::int32_t k = 0;
};
QueueingDraw sample_partition_queueing(std::int64_t n, double mu, Rng& rng);

/// P(k) = C(n-1, k-1) q^(k-1) (1-q)^(n-k); zero outside 1..n.
double prior_k_pmf(std::int64_t n, double q, std::int64_t k);
double log_prior_k_pmf(std::int64_t n, double q, std::int64_t k);

/// Exact ln P(g,k) of the queueing process:
/// ln[q^(k-1) (1-q)^(n-k) prod n_r! / n!].
double log_prior_queueing(std::int64_t n, double q, std::span<const std::int64_t> sizes);

/// Non-parametric prior with possibly empty groups: ln[(k-1)! prod n_r! / (n+k-1)!].
double log_prior_nonparametric(std::int64_t n, std::span<const std::int64_t> sizes);

/// Prior on assignments into k non-empty groups: ln[prod n_r! / (C(n-1,k-1) n!)].
double log_prior_nonempty(std::int64_t n, std::span<const std::int64_t> sizes);

}  // namespace ncomm
