#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ncomm/graph.hpp"
#include "ncomm/partition_state.hpp"

namespace ncomm {

/// ln(x!) for integer x, accumulated term by term in extended precision.
class LogFactorialTable {
public:
  explicit LogFactorialTable(std::int64_t max_arg = 1024);

  double operator()(std::int64_t x) const { return table_[static_cast<std::size_t>(x)]; }
  std::int64_t max_arg() const noexcept { return static_cast<std::int64_t>(table_.size()) - 1; }
  /// Grows the table so that x is covered. Not safe while other threads read.
  void extend(std::int64_t x);

private:
  std::vector<double> table_;
  long double running_ = 0.0L;
};

/// Read-only lookup tables for one graph, shared by every chain on it.
///
/// Besides ln(x!) up to n+2m this caches ln(x) up to n, ln(p n_r n_s + 1)
/// for products up to a size cap, and ln(p n_r^2/2 + 1) for every n_r.
class LikelihoodTables {
public:
  explicit LikelihoodTables(const Graph& g);

  const LogFactorialTable& log_factorial() const noexcept { return lnfact_; }
  double lnfact(std::int64_t x) const { return lnfact_(x); }
  double ln(std::int64_t x) const { return log_int_[static_cast<std::size_t>(x)]; }
  /// ln(p * product + 1)
  double between(std::int64_t product) const {
    return product < static_cast<std::int64_t>(between_.size())
               ? between_[static_cast<std::size_t>(product)]
               : std::log1p(p_ * static_cast<double>(product));
  }
  /// ln(p * size^2 / 2 + 1)
  double within(std::int64_t size) const { return within_[static_cast<std::size_t>(size)]; }
  double density() const noexcept { return p_; }

private:
  double p_;
  LogFactorialTable lnfact_;
  std::vector<double> log_int_;
  std::vector<double> between_;
  std::vector<double> within_;
};

/// ln P(A|g,k) of the degree-corrected block model with theta and omega
/// integrated out, dropping the partition-independent constant.
double log_marginal_likelihood(const LikelihoodTables& tables, const PartitionState& state);
double log_marginal_likelihood(const Graph& g, const PartitionState& state);

/// Change in log_marginal_likelihood caused by `move`, touching only the two
/// affected groups. `counts` must hold the node's neighbor counts.
double log_likelihood_ratio(const LikelihoodTables& tables, const PartitionState& state,
                            const Move& move, const NeighborCounts& counts);
double log_likelihood_ratio(const Graph& g, const PartitionState& state, const Move& move);

}  // namespace ncomm
