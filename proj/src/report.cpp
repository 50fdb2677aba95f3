#include "ncomm/report.hpp"

#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace ncomm {

json config_to_json(const SamplerConfig& c) {
  return {{"sweeps", c.sweeps},
          {"burn_in_sweeps", c.burn_in_sweeps},
          {"chains", c.chains},
          {"mu", c.mu},
          {"seed", c.seed},
          {"init", c.initial_labels.empty() ? "random" : "given"},
          {"init_mu_max", c.init_mu_max}};
}

json summary_to_json(const PosteriorSummary& s, const json& config) {
  json doc;
  doc["n"] = s.n;
  doc["m"] = s.m;
  doc["config"] = config;
  doc["samples"] = s.samples;

  json hist = json::object();
  for (auto [k, p] : s.k_histogram) hist[std::to_string(k)] = p;
  doc["k_histogram"] = hist;
  doc["keff_histogram"] = {{"bin_start", s.keff_histogram.bin_start},
                           {"bin_width", s.keff_histogram.bin_width},
                           {"counts", s.keff_histogram.counts}};
  doc["k_mode"] = s.k_mode;
  doc["map"] = {{"log_posterior", s.map_log_posterior},
                {"chain", s.map_chain},
                {"labels", s.map_labels}};
  doc["omega_hat"] = s.omega_hat;

  json meta = json::array();
  for (const auto& e : s.meta_network.edges) meta.push_back({{"r", e.r}, {"s", e.s}, {"weight", e.weight}});
  doc["meta_network"] = meta;
  doc["group_sizes"] = s.meta_network.sizes;

  json chains = json::array();
  for (const auto& c : s.per_chain)
    chains.push_back({{"chain", c.chain},
                      {"k_mode", c.k_mode},
                      {"initial_k", c.initial_k},
                      {"initial_mu", c.initial_mu},
                      {"acceptance_rate", c.acceptance_rate},
                      {"steps_per_second", c.steps_per_second}});
  doc["per_chain"] = chains;
  return doc;
}

void write_k_histogram_csv(std::ostream& out, const PosteriorSummary& s) {
  out << "k,probability\n" << std::setprecision(17);
  for (auto [k, p] : s.k_histogram) out << k << ',' << p << '\n';
}

void write_keff_histogram_csv(std::ostream& out, const PosteriorSummary& s) {
  const auto& h = s.keff_histogram;
  out << "bin_lower,bin_upper,count,density\n" << std::setprecision(10);
  const double total = static_cast<double>(s.samples);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double lo = h.bin_start + static_cast<double>(b) * h.bin_width;
    out << lo << ',' << lo + h.bin_width << ',' << h.counts[b] << ','
        << static_cast<double>(h.counts[b]) / (total * h.bin_width) << '\n';
  }
}

void write_omega_csv(std::ostream& out, const Matrix& omega) {
  out << std::setprecision(17);
  for (const auto& row : omega) {
    for (std::size_t s = 0; s < row.size(); ++s) out << (s ? "," : "") << row[s];
    out << '\n';
  }
}

void write_meta_network_csv(std::ostream& out, const MetaNetwork& net) {
  out << "r,s,weight\n";
  for (const auto& e : net.edges) out << e.r << ',' << e.s << ',' << e.weight << '\n';
}

json spec_to_json(const SbmSpec& spec) {
  json doc{{"n", spec.num_nodes()}, {"k", spec.num_groups()}, {"sizes", spec.sizes}, {"omega", spec.omega}};
  doc["expected_edges"] = spec.expected_edges();
  doc["degree_corrected"] = !spec.theta.empty();
  return doc;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace ncomm
