#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncomm/generators.hpp"
#include "ncomm/sampler.hpp"

namespace ncomm {

inline constexpr const char* kToolVersion = "0.3.0";

enum class BenchModel { sbm, mixed, detectability, dcsbm_powerlaw };
enum class BenchInit { random, ground_truth };

struct BenchOptions {
  BenchModel model = BenchModel::sbm;
  std::int64_t n = 1000;
  /// Fixed group size; when positive, n = k * group_size for each grid point.
  std::int64_t group_size = 0;
  double c = 30.0;
  double in_fraction = 0.9;
  std::vector<std::int32_t> ks;
  std::vector<double> xs{2.0};
  std::vector<std::int64_t> min_sizes;
  PowerLawSpec powerlaw;
  std::int32_t graphs = 1;
  BenchInit init = BenchInit::random;
  SamplerConfig sampler;
};

struct BenchRow {
  std::string model;
  std::int64_t n = 0;
  std::int32_t planted_k = 0;
  double x = 0.0;
  std::int64_t min_size = 0;
  std::int32_t graph = 0;
  std::int32_t inferred_k_mode = 0;
  /// Fraction of chains whose own post-burn-in mode equals planted_k.
  double fraction_correct = 0.0;
};

/// Generates one graph per (grid point, replicate) and infers k on it.
/// Graph and chain seeds derive from options.sampler.seed.
std::vector<BenchRow> run_benchmark(const BenchOptions& options);

/// Builds the block spec for one grid point.
SbmSpec bench_spec(const BenchOptions& options, std::int32_t k, double x);

/// Entry point for the `ncomm` tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncomm
