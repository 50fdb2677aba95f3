#include "ncomm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace ncomm {

std::int64_t SbmSpec::num_nodes() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

std::vector<std::int32_t> SbmSpec::labels() const {
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(num_nodes()));
  for (std::size_t r = 0; r < sizes.size(); ++r)
    out.insert(out.end(), static_cast<std::size_t>(sizes[r]), static_cast<std::int32_t>(r + 1));
  return out;
}

double SbmSpec::expected_edges() const {
  double total = 0.0;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    const double nr = static_cast<double>(sizes[r]);
    total += 0.5 * nr * nr * omega[r][r];
    for (std::size_t s = r + 1; s < sizes.size(); ++s)
      total += nr * static_cast<double>(sizes[s]) * omega[r][s];
  }
  return total;
}

void SbmSpec::validate() const {
  const std::size_t k = sizes.size();
  if (k == 0) throw std::invalid_argument("block model needs at least one group");
  for (auto s : sizes)
    if (s < 1) throw std::invalid_argument("group sizes must be positive");
  if (omega.size() != k) throw std::invalid_argument("omega must be k x k");
  for (std::size_t r = 0; r < k; ++r) {
    if (omega[r].size() != k) throw std::invalid_argument("omega must be k x k");
    for (std::size_t s = 0; s < k; ++s) {
      if (!(omega[r][s] >= 0.0) || !std::isfinite(omega[r][s]))
        throw std::invalid_argument("omega entries must be finite and non-negative");
      if (std::abs(omega[r][s] - omega[s][r]) > 1e-12 * std::max(1.0, std::abs(omega[r][s])))
        throw std::invalid_argument("omega must be symmetric");
    }
  }
  if (theta.empty()) return;
  if (theta.size() != static_cast<std::size_t>(num_nodes()))
    throw std::invalid_argument("theta length does not match node count");
  std::size_t offset = 0;
  for (auto s : sizes) {
    double sum = 0.0;
    for (std::size_t i = offset; i < offset + static_cast<std::size_t>(s); ++i) {
      if (!(theta[i] >= 0.0)) throw std::invalid_argument("theta must be non-negative");
      sum += theta[i];
    }
    if (std::abs(sum / static_cast<double>(s) - 1.0) > 1e-9)
      throw std::invalid_argument("theta must have mean 1 within each group");
    offset += static_cast<std::size_t>(s);
  }
}

GeneratedGraph generate_sbm(const SbmSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t k = spec.sizes.size();
  const auto n = static_cast<NodeId>(spec.num_nodes());

  std::vector<NodeId> offset(k + 1, 0);
  for (std::size_t r = 0; r < k; ++r) offset[r + 1] = offset[r] + static_cast<NodeId>(spec.sizes[r]);

  // With theta summing to n_r per group, the edge count between two groups
  // is Poisson with mean omega n_r n_s and each endpoint is drawn
  // independently in proportion to theta. This reproduces the independent
  // per-pair Poisson counts exactly.
  std::vector<std::discrete_distribution<NodeId>> pick;
  if (!spec.theta.empty()) {
    for (std::size_t r = 0; r < k; ++r)
      pick.emplace_back(spec.theta.begin() + offset[r], spec.theta.begin() + offset[r + 1]);
  }
  auto endpoint = [&](std::size_t r) -> NodeId {
    if (pick.empty()) return offset[r] + uniform_index<NodeId>(rng, offset[r + 1] - offset[r]);
    return offset[r] + pick[r](rng);
  };

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(spec.expected_edges() * 1.1) + 16);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t s = r; s < k; ++s) {
      const double nr = static_cast<double>(spec.sizes[r]);
      const double ns = static_cast<double>(spec.sizes[s]);
      const double mean = (r == s ? 0.5 : 1.0) * nr * ns * spec.omega[r][s];
      if (mean <= 0.0) continue;
      const auto count = std::poisson_distribution<std::int64_t>(mean)(rng);
      for (std::int64_t e = 0; e < count; ++e) {
        NodeId u = endpoint(r);
        NodeId v = endpoint(s);
        edges.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::sort(edges.begin(), edges.end());

  GeneratedGraph out;
  out.graph = Graph::from_edges(n, edges);
  out.labels = spec.labels();
  return out;
}

namespace {

std::vector<std::int64_t> near_equal_sizes(std::int64_t n, std::int32_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (n < k) throw std::invalid_argument("cannot split n nodes into more than n groups");
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), n / k);
  for (std::int64_t r = 0; r < n % k; ++r) ++sizes[static_cast<std::size_t>(r)];
  return sizes;
}

}  // namespace

SbmSpec planted_partition(std::int64_t n, std::int32_t k, double c, double in_fraction) {
  if (!(c >= 0.0)) throw std::invalid_argument("mean degree must be non-negative");
  if (!(in_fraction >= 0.0 && in_fraction <= 1.0))
    throw std::invalid_argument("in-group fraction must lie in [0, 1]");
  if (k == 1 && in_fraction < 1.0 && c > 0.0)
    throw std::invalid_argument("a single group cannot have between-group edges");
  SbmSpec spec;
  spec.sizes = near_equal_sizes(n, k);
  const double nd = static_cast<double>(n);
  const double w_in = in_fraction * c * k / nd;
  const double w_out = k > 1 ? (1.0 - in_fraction) * c * k / (nd * (k - 1)) : 0.0;
  spec.omega.assign(k, std::vector<double>(k, w_out));
  for (std::int32_t r = 0; r < k; ++r) spec.omega[r][r] = w_in;
  return spec;
}

double DetectabilitySpec::c_in() const { return c + (k - 1) * x * std::sqrt(c); }
double DetectabilitySpec::c_out() const { return c - x * std::sqrt(c); }

SbmSpec spec_from_detectability(const DetectabilitySpec& d) {
  if (d.k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(d.c > 0.0)) throw std::invalid_argument("mean degree must be positive");
  const double cin = d.c_in();
  const double cout = d.c_out();
  const double tol = 1e-12 * d.c;
  if (cin < -tol || cout < -tol) {
    const double lo = -std::sqrt(d.c) / std::max(1, d.k - 1);
    throw std::invalid_argument("mixing x=" + std::to_string(d.x) + " is infeasible; need " +
                                std::to_string(lo) + " <= x <= " + std::to_string(std::sqrt(d.c)));
  }
  SbmSpec spec;
  spec.sizes = near_equal_sizes(d.n, d.k);
  const double nd = static_cast<double>(d.n);
  spec.omega.assign(d.k, std::vector<double>(d.k, std::max(0.0, cout) / nd));
  for (std::int32_t r = 0; r < d.k; ++r) spec.omega[r][r] = std::max(0.0, cin) / nd;
  return spec;
}

SbmSpec permute_mixing(const SbmSpec& spec, const std::vector<std::int32_t>& sigma) {
  const auto k = static_cast<std::size_t>(spec.num_groups());
  if (sigma.size() != k) throw std::invalid_argument("permutation length must equal k");
  std::vector<bool> seen(k, false);
  for (auto v : sigma) {
    if (v < 1 || static_cast<std::size_t>(v) > k || seen[v - 1])
      throw std::invalid_argument("not a permutation of 1..k");
    seen[v - 1] = true;
  }
  SbmSpec out = spec;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t s = 0; s < k; ++s) out.omega[r][s] = spec.omega[sigma[r] - 1][s];
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t s = r + 1; s < k; ++s)
      if (std::abs(out.omega[r][s] - out.omega[s][r]) >
          1e-12 * std::max(1.0, std::abs(out.omega[r][s])))
        throw std::invalid_argument("permutation leaves the block matrix asymmetric");
  return out;
}

std::vector<std::int32_t> default_mixing_permutation(std::int32_t k) {
  std::vector<std::int32_t> sigma(static_cast<std::size_t>(k));
  std::iota(sigma.begin(), sigma.end(), 1);
  const std::int32_t swapped = std::min(k - k % 2, 2 * ((k + 3) / 4));
  for (std::int32_t r = 0; r + 1 < swapped; r += 2) std::swap(sigma[r], sigma[r + 1]);
  return sigma;
}

namespace {

double powerlaw_draw(double exponent, double lo, double hi, double u) {
  if (std::abs(exponent - 1.0) < 1e-12) return lo * std::pow(hi / lo, u);
  const double a = 1.0 - exponent;
  const double lo_a = std::pow(lo, a);
  return std::pow(lo_a + u * (std::pow(hi, a) - lo_a), 1.0 / a);
}

double powerlaw_mean(double exponent, double lo, double hi) {
  if (std::abs(exponent - 1.0) < 1e-12) return (hi - lo) / std::log(hi / lo);
  if (std::abs(exponent - 2.0) < 1e-12) return std::log(hi / lo) / (1.0 / lo - 1.0 / hi);
  const double a = 1.0 - exponent;
  const double b = 2.0 - exponent;
  return (a / b) * (std::pow(hi, b) - std::pow(lo, b)) / (std::pow(hi, a) - std::pow(lo, a));
}

}  // namespace

double powerlaw_cdf(double x, double exponent, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  if (std::abs(exponent - 1.0) < 1e-12) return std::log(x / lo) / std::log(hi / lo);
  const double a = 1.0 - exponent;
  return (std::pow(x, a) - std::pow(lo, a)) / (std::pow(hi, a) - std::pow(lo, a));
}

double powerlaw_lower_cutoff(double exponent, double mean, double max) {
  if (!(mean > 0.0) || !(mean < max))
    throw std::invalid_argument("mean degree must lie strictly between 0 and the maximum degree");
  double lo = 1e-9 * max;
  double hi = max * (1.0 - 1e-12);
  if (powerlaw_mean(exponent, lo, max) > mean)
    throw std::invalid_argument("mean degree too small for this exponent and maximum");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (powerlaw_mean(exponent, mid, max) < mean ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

std::vector<std::int64_t> draw_powerlaw_sizes(const PowerLawSpec& spec, Rng& rng) {
  if (spec.min_size < 1) throw std::invalid_argument("minimum group size must be positive");
  if (!(spec.size_ratio >= 1.0)) throw std::invalid_argument("size ratio must be >= 1");
  if (spec.n < spec.min_size)
    throw std::invalid_argument("network smaller than the minimum group size");
  const double lo = static_cast<double>(spec.min_size);
  const double hi = lo * spec.size_ratio;

  std::vector<std::int64_t> sizes;
  std::int64_t remaining = spec.n;
  while (remaining > 0) {
    auto s = static_cast<std::int64_t>(std::llround(powerlaw_draw(spec.size_exponent, lo, hi, uniform_unit(rng))));
    s = std::clamp(s, spec.min_size, static_cast<std::int64_t>(std::floor(hi)));
    if (s < remaining) {
      sizes.push_back(s);
      remaining -= s;
      continue;
    }
    // Last group takes the remainder; a remainder below the minimum is
    // absorbed by the previous group.
    if (remaining >= spec.min_size || sizes.empty())
      sizes.push_back(remaining);
    else
      sizes.back() += remaining;
    remaining = 0;
  }
  return sizes;
}

SbmSpec powerlaw_block_spec(const PowerLawSpec& spec, Rng& rng, std::vector<double>* expected_degree) {
  if (!(spec.mixing >= 0.0 && spec.mixing <= 1.0))
    throw std::invalid_argument("mixing fraction must lie in [0, 1]");
  SbmSpec out;
  out.sizes = draw_powerlaw_sizes(spec, rng);
  const std::size_t k = out.sizes.size();
  if (k == 1 && spec.mixing > 0.0)
    throw std::invalid_argument("a single community cannot have between-group edges");

  const double dmin = powerlaw_lower_cutoff(spec.degree_exponent, spec.mean_degree, spec.max_degree);
  std::vector<double> kappa(static_cast<std::size_t>(spec.n));
  for (auto& v : kappa) v = powerlaw_draw(spec.degree_exponent, dmin, spec.max_degree, uniform_unit(rng));

  // theta_i = kappa_i / mean kappa in the group; T_r = total kappa of group r.
  out.theta.resize(kappa.size());
  std::vector<double> total(k, 0.0);
  std::size_t offset = 0;
  for (std::size_t r = 0; r < k; ++r) {
    const auto nr = static_cast<std::size_t>(out.sizes[r]);
    for (std::size_t i = offset; i < offset + nr; ++i) total[r] += kappa[i];
    const double mean = total[r] / static_cast<double>(nr);
    for (std::size_t i = offset; i < offset + nr; ++i) out.theta[i] = kappa[i] / mean;
    offset += nr;
  }

  // Within: theta_i omega_rr n_r = (1 - mixing) kappa_i.
  // Between: omega_rs n_r n_s = x_r x_s T_r T_s with x_r sum_{s!=r} x_s T_s = mixing,
  // solved by damped fixed-point iteration. When no exact solution exists
  // (one group holding over half the total degree) the proportional
  // approximation x_r = sqrt(mixing / T) is used instead.
  const double grand = std::accumulate(total.begin(), total.end(), 0.0);
  std::vector<double> x(k, std::sqrt(spec.mixing / grand));
  if (spec.mixing > 0.0) {
    std::vector<double> trial = x;
    bool converged = false;
    for (int it = 0; it < 20000 && !converged; ++it) {
      double weighted = 0.0;
      for (std::size_t r = 0; r < k; ++r) weighted += trial[r] * total[r];
      double worst = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        const double rest = weighted - trial[r] * total[r];
        worst = std::max(worst, std::abs(trial[r] * rest / spec.mixing - 1.0));
        trial[r] = std::sqrt(trial[r] * spec.mixing / rest);
      }
      converged = worst < 1e-12;
    }
    if (converged) x = trial;
  }

  out.omega.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    const double nr = static_cast<double>(out.sizes[r]);
    out.omega[r][r] = (1.0 - spec.mixing) * total[r] / (nr * nr);
    for (std::size_t s = r + 1; s < k; ++s) {
      const double ns = static_cast<double>(out.sizes[s]);
      out.omega[r][s] = out.omega[s][r] = x[r] * x[s] * total[r] * total[s] / (nr * ns);
    }
  }
  if (expected_degree) *expected_degree = std::move(kappa);
  return out;
}

GeneratedGraph generate_dcsbm_powerlaw(const PowerLawSpec& spec, Rng& rng) {
  std::vector<double> kappa;
  SbmSpec block = powerlaw_block_spec(spec, rng, &kappa);
  GeneratedGraph out = generate_sbm(block, rng);
  out.expected_degree = std::move(kappa);
  return out;
}

}  // namespace ncomm
