#pragma once

#include <cstdint>
#include <vector>

#include "ncomm/analysis.hpp"
#include "ncomm/graph.hpp"
#include "ncomm/rng.hpp"

namespace ncomm {

/// Degree-corrected block model: a_ij ~ Poisson(theta_i theta_j omega_{g_i g_j})
/// for i < j and Poisson(theta_i^2 omega_{g_i g_i} / 2) self-loops at i.
/// Groups occupy contiguous node ranges in order.
struct SbmSpec {
  std::vector<std::int64_t> sizes;
  Matrix omega;
  /// Per-node propensities, mean 1 within each group; empty means all 1.
  std::vector<double> theta;

  std::int64_t num_nodes() const;
  std::int32_t num_groups() const { return static_cast<std::int32_t>(sizes.size()); }
  /// 1-based ground-truth labels implied by `sizes`.
  std::vector<std::int32_t> labels() const;
  /// sum_{r<s} n_r n_s omega_rs + sum_r n_r^2 omega_rr / 2
  double expected_edges() const;
  void validate() const;
};

struct GeneratedGraph {
  Graph graph;
  std::vector<std::int32_t> labels;
  /// Target expected degree per node, when the generator has one.
  std::vector<double> expected_degree;
};

GeneratedGraph generate_sbm(const SbmSpec& spec, Rng& rng);

/// k near-equal groups, mean degree c, a fraction `in_fraction` of it
/// expected inside the node's own group.
SbmSpec planted_partition(std::int64_t n, std::int32_t k, double c, double in_fraction);

/// Equal-size groups parametrized by the normalized mixing
/// x = (c_in - c_out) / (k sqrt(c)), which puts the detectability threshold
/// at |x| = 1 for every k. Here c_in = n omega_rr and c_out = n omega_rs.
struct DetectabilitySpec {
  std::int64_t n = 1000;
  std::int32_t k = 2;
  double c = 30.0;
  double x = 0.0;

  double c_in() const;
  double c_out() const;
};

SbmSpec spec_from_detectability(const DetectabilitySpec& spec);

/// Row-permutes the block matrix, omega'_rs = omega_{sigma(r) s}, to move
/// diagonal entries off the diagonal. `sigma` is 1-based. Throws unless the
/// result is still symmetric (an involution does this for two-valued
/// planted matrices).
SbmSpec permute_mixing(const SbmSpec& spec, const std::vector<std::int32_t>& sigma);

/// Swaps consecutive group pairs (1,2), (3,4), ... over the first
/// 2*ceil(k/4) groups; the rest stay assortative.
std::vector<std::int32_t> default_mixing_permutation(std::int32_t k);

/// Power-law degree-corrected benchmark: community sizes from a truncated
/// power law on [min_size, size_ratio*min_size], expected degrees from a
/// truncated power law with the requested mean and maximum, and a fraction
/// `mixing` of each node's expected degree leaving its group.
struct PowerLawSpec {
  std::int64_t n = 1000;
  std::int64_t min_size = 20;
  double size_ratio = 5.0;
  double size_exponent = 1.0;
  double degree_exponent = 2.0;
  double mean_degree = 20.0;
  double max_degree = 50.0;
  double mixing = 0.1;
};

/// Lower cutoff that gives a truncated power law on [d_min, max] the mean.
double powerlaw_lower_cutoff(double exponent, double mean, double max);
/// CDF of the truncated continuous power law on [lo, hi].
double powerlaw_cdf(double x, double exponent, double lo, double hi);

std::vector<std::int64_t> draw_powerlaw_sizes(const PowerLawSpec& spec, Rng& rng);
SbmSpec powerlaw_block_spec(const PowerLawSpec& spec, Rng& rng, std::vector<double>* expected_degree);
GeneratedGraph generate_dcsbm_powerlaw(const PowerLawSpec& spec, Rng& rng);

}  // namespace ncomm
