#include "ncomm/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncomm {

namespace {

double lnfact(std::int64_t x) { return std::lgamma(static_cast<double>(x) + 1.0); }

double log_choose(std::int64_t n, std::int64_t r) { return lnfact(n) - lnfact(r) - lnfact(n - r); }

std::int64_t checked_total(std::span<const std::int64_t> sizes) {
  std::int64_t total = 0;
  for (auto s : sizes) {
    if (s < 0) throw std::invalid_argument("group sizes must be non-negative");
    total += s;
  }
  return total;
}

}  // namespace

double PriorParams::log_group_penalty(std::int64_t n) const {
  return std::log((static_cast<double>(n) - 1.0 - mu) / mu);
}

void PriorParams::validate(std::int64_t n) const {
  if (n < 3) throw std::invalid_argument("the partition prior needs at least 3 nodes");
  if (!(mu > 0.0) || !(mu < static_cast<double>(n - 1)))
    throw std::invalid_argument("mu must satisfy 0 < mu < n-1 (n=" + std::to_string(n) + ")");
}

double log_prior_working(std::int64_t n, std::span<const std::int64_t> sizes,
                         const PriorParams& params) {
  params.validate(n);
  if (checked_total(sizes) != n) throw std::invalid_argument("group sizes do not sum to n");
  double total = -static_cast<double>(sizes.size()) * params.log_group_penalty(n);
  for (auto s : sizes) total += lnfact(s);
  return total;
}

double log_prior_working(const PartitionState& state, const PriorParams& params) {
  auto sizes = state.sizes();
  return log_prior_working(state.num_nodes(), sizes, params);
}

double log_prior_ratio(const PartitionState& state, const Move& move, const PriorParams& params) {
  const std::int64_t n = state.num_nodes();
  const double nr = static_cast<double>(state.size(move.from));
  if (move.kind == MoveKind::type1) {
    const double ns_after = static_cast<double>(state.size(move.to) + 1);
    if (move.empties_source) return params.log_group_penalty(n) + std::log(ns_after);
    return std::log(ns_after / nr);
  }
  if (move.empties_source) return 0.0;
  return -(params.log_group_penalty(n) + std::log(nr));
}

QueueingDraw sample_partition_queueing(std::int64_t n, double mu, Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one node");
  if (n == 1) return {{1}, 1};
  if (!(mu > 0.0) || !(mu < static_cast<double>(n - 1)))
    throw std::invalid_argument("mu must satisfy 0 < mu < n-1");
  const double q = mu / static_cast<double>(n - 1);

  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::bernoulli_distribution start_new(q);
  QueueingDraw draw;
  draw.labels.assign(static_cast<std::size_t>(n), 0);
  draw.k = 1;
  draw.labels[order[0]] = 1;
  for (std::size_t idx = 1; idx < order.size(); ++idx) {
    if (start_new(rng)) ++draw.k;
    draw.labels[order[idx]] = draw.k;
  }
  return draw;
}

double log_prior_k_pmf(std::int64_t n, double q, std::int64_t k) {
  if (k < 1 || k > n) return -INFINITY;
  const double a = static_cast<double>(k - 1);
  const double b = static_cast<double>(n - k);
  double lp = log_choose(n - 1, k - 1);
  if (a > 0) lp += a * std::log(q);
  if (b > 0) lp += b * std::log1p(-q);
  return lp;
}

double prior_k_pmf(std::int64_t n, double q, std::int64_t k) {
  if (k < 1 || k > n) return 0.0;
  return std::exp(log_prior_k_pmf(n, q, k));
}

double log_prior_queueing(std::int64_t n, double q, std::span<const std::int64_t> sizes) {
  if (checked_total(sizes) != n) throw std::invalid_argument("group sizes do not sum to n");
  if (std::any_of(sizes.begin(), sizes.end(), [](auto s) { return s == 0; }))
    throw std::invalid_argument("queueing prior never produces empty groups");
  const auto k = static_cast<std::int64_t>(sizes.size());
  double lp = -lnfact(n);
  if (k > 1) lp += static_cast<double>(k - 1) * std::log(q);
  if (n > k) lp += static_cast<double>(n - k) * std::log1p(-q);
  for (auto s : sizes) lp += lnfact(s);
  return lp;
}

double log_prior_nonparametric(std::int64_t n, std::span<const std::int64_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("need at least one group");
  if (checked_total(sizes) != n) throw std::invalid_argument("group sizes do not sum to n");
  const auto k = static_cast<std::int64_t>(sizes.size());
  double lp = lnfact(k - 1) - lnfact(n + k - 1);
  for (auto s : sizes) lp += lnfact(s);
  return lp;
}

double log_prior_nonempty(std::int64_t n, std::span<const std::int64_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("need at least one group");
  if (checked_total(sizes) != n) throw std::invalid_argument("group sizes do not sum to n");
  if (std::any_of(sizes.begin(), sizes.end(), [](auto s) { return s == 0; }))
    throw std::invalid_argument("non-empty prior requires every group size >= 1");
  const auto k = static_cast<std::int64_t>(sizes.size());
  double lp = -log_choose(n - 1, k - 1) - lnfact(n);
  for (auto s : sizes) lp += lnfact(s);
  return lp;
}

}  // namespace ncomm
