#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "ncomm/analysis.hpp"
#include "ncomm/generators.hpp"
#include "ncomm/sampler.hpp"

namespace ncomm {

using json = nlohmann::ordered_json;

json config_to_json(const SamplerConfig& config);

/// Summary document: n, m, config, k_histogram, keff_histogram, k_mode,
/// map, omega_hat, meta_network, group_sizes, per_chain.
json summary_to_json(const PosteriorSummary& summary, const json& config);

void write_k_histogram_csv(std::ostream& out, const PosteriorSummary& summary);
void write_keff_histogram_csv(std::ostream& out, const PosteriorSummary& summary);
void write_omega_csv(std::ostream& out, const Matrix& omega);
void write_meta_network_csv(std::ostream& out, const MetaNetwork& net);

json spec_to_json(const SbmSpec& spec);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace ncomm
