#include "ncomm/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "ncomm/analysis.hpp"
#include "ncomm/graph.hpp"
#include "ncomm/report.hpp"

namespace fs = std::filesystem;

namespace ncomm {

namespace {

/// Collects output files in memory and publishes them together, so a failed
/// run never leaves a partial set behind.
class OutputSet {
public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }

  void commit() const {
    fs::create_directories(dir_);
    const fs::path staging = dir_ / (".ncomm-staging-" + std::to_string(::getpid()));
    fs::remove_all(staging);
    fs::create_directories(staging);
    try {
      for (const auto& [name, content] : files_) {
        std::ofstream f(staging / name, std::ios::binary);
        f << content;
        if (!f.flush()) throw std::runtime_error("failed writing " + name);
      }
      for (const auto& [name, content] : files_) fs::rename(staging / name, dir_ / name);
    } catch (...) {
      fs::remove_all(staging);
      throw;
    }
    fs::remove_all(staging);
  }

private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string default_output_dir() {
  const char* env = std::getenv("NCOMM_OUTPUT_DIR");
  return (env && *env) ? env : ".";
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json manifest(const std::string& subcommand, const json& params, std::uint64_t seed,
              const std::string& digest, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "ncomm";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["parameters"] = params;
  m["seed"] = seed;
  if (!digest.empty()) m["input_sha256"] = digest;
  m["outputs"] = outputs;
  return m;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Maps a generator ground-truth file onto the loaded graph's node order and
/// compacts labels to 1..k.
std::vector<std::int32_t> labels_from_truth(const Graph& g, const std::string& path) {
  json truth = json::parse(read_file(path));
  const auto& by_id = truth.at("labels");
  std::vector<std::int32_t> raw(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::size_t pos = 0;
    long id = std::stol(g.label(i), &pos);
    if (pos != g.label(i).size() || id < 0 || static_cast<std::size_t>(id) >= by_id.size())
      throw std::runtime_error("node '" + g.label(i) + "' has no ground-truth label");
    raw[i] = by_id[static_cast<std::size_t>(id)].get<std::int32_t>();
  }
  std::map<std::int32_t, std::int32_t> compact;
  for (auto l : raw) compact.emplace(l, 0);
  std::int32_t next = 0;
  for (auto& [l, c] : compact) c = ++next;
  for (auto& l : raw) l = compact[l];
  return raw;
}

std::vector<std::int32_t> parse_int_list(const std::string& text) {
  std::vector<std::int32_t> out;
  std::stringstream s(text);
  std::string tok;
  while (std::getline(s, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

// -- infer -------------------------------------------------------------------

struct InferArgs {
  std::string input;
  std::string output_dir = default_output_dir();
  std::string init_labels;
  bool write_map = false;
  bool write_omega = false;
  SamplerConfig config;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
  const std::string bytes = read_file(a.input);
  std::istringstream in(bytes);
  Graph g = load_edge_list(in);

  SamplerConfig config = a.config;
  if (!a.init_labels.empty()) config.initial_labels = labels_from_truth(g, a.init_labels);
  config.validate(g.num_nodes());

  auto chains = run_chains(g, config);
  PosteriorSummary summary = summarize(g, chains);

  json cfg = config_to_json(config);
  json doc = summary_to_json(summary, cfg);
  doc["timestamp"] = utc_timestamp();

  OutputSet files(a.output_dir);
  files.add("summary.json", dump(doc));
  std::ostringstream khist, keff;
  write_k_histogram_csv(khist, summary);
  write_keff_histogram_csv(keff, summary);
  files.add("k_histogram.csv", khist.str());
  files.add("keff_histogram.csv", keff.str());
  if (a.write_map) {
    std::ostringstream map;
    map << "node,group\n";
    for (NodeId i = 0; i < g.num_nodes(); ++i) map << g.label(i) << ',' << summary.map_labels[i] << '\n';
    files.add("map_partition.csv", map.str());
  }
  if (a.write_omega) {
    std::ostringstream omega, meta;
    write_omega_csv(omega, summary.omega_hat);
    write_meta_network_csv(meta, summary.meta_network);
    files.add("omega_hat.csv", omega.str());
    files.add("meta_network.csv", meta.str());
  }
  json params = cfg;
  params["input"] = a.input;
  params["map"] = a.write_map;
  params["omega"] = a.write_omega;
  if (!a.init_labels.empty()) params["init_labels"] = a.init_labels;
  auto names = files.names();
  names.push_back("manifest.json");
  files.add("manifest.json", dump(manifest("infer", params, config.seed, sha256_hex(bytes), names)));
  files.commit();

  out << "n=" << summary.n << " m=" << summary.m << " k_mode=" << summary.k_mode << '\n';
  for (auto [k, p] : summary.k_histogram) out << "  P(k=" << k << ") = " << p << '\n';
  return 0;
}

// -- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::string model = "sbm";
  std::int64_t n = 1000;
  std::int32_t k = 2;
  std::int64_t group_size = 0;
  double c = 30.0;
  double in_fraction = 0.9;
  double x = 0.0;
  std::string perm;
  PowerLawSpec powerlaw;
  std::uint64_t seed = 1;
  std::string output_dir = default_output_dir();
  std::string name = "graph";
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  Rng rng = make_stream_rng(a.seed, 0);
  const std::int64_t n = a.group_size > 0 ? a.group_size * a.k : a.n;
  GeneratedGraph gen;
  SbmSpec spec;
  json params{{"model", a.model}, {"seed", a.seed}};

  if (a.model == "sbm" || a.model == "mixed") {
    spec = planted_partition(n, a.k, a.c, a.in_fraction);
    params.update({{"n", n}, {"k", a.k}, {"c", a.c}, {"in_fraction", a.in_fraction}});
    if (a.model == "mixed") {
      auto sigma = a.perm.empty() ? default_mixing_permutation(a.k) : parse_int_list(a.perm);
      spec = permute_mixing(spec, sigma);
      params["permutation"] = sigma;
    }
    gen = generate_sbm(spec, rng);
  } else if (a.model == "detectability") {
    DetectabilitySpec d{n, a.k, a.c, a.x};
    spec = spec_from_detectability(d);
    params.update({{"n", n}, {"k", a.k}, {"c", a.c}, {"x", a.x}, {"c_in", d.c_in()}, {"c_out", d.c_out()},
                   {"x_normalization", "(c_in - c_out) / (k * sqrt(c)); threshold at |x| = 1"}});
    gen = generate_sbm(spec, rng);
  } else if (a.model == "dcsbm-powerlaw") {
    PowerLawSpec p = a.powerlaw;
    p.n = n;
    spec = powerlaw_block_spec(p, rng, &gen.expected_degree);
    auto kappa = std::move(gen.expected_degree);
    gen = generate_sbm(spec, rng);
    gen.expected_degree = std::move(kappa);
    params.update({{"n", n},
                   {"min_size", p.min_size},
                   {"size_ratio", p.size_ratio},
                   {"size_exponent", p.size_exponent},
                   {"degree_exponent", p.degree_exponent},
                   {"mean_degree", p.mean_degree},
                   {"max_degree", p.max_degree},
                   {"mixing", p.mixing}});
  } else {
    throw ConfigError("unknown model '" + a.model + "'");
  }

  std::ostringstream edges;
  std::vector<std::string> header{"ncomm generate --model " + a.model,
                                  "nodes: " + std::to_string(gen.graph.num_nodes()) +
                                      " edges: " + std::to_string(gen.graph.num_edges())};
  // Nodes without edges are not representable in an edge list; skip them
  // rather than let write_edge_list emit nothing for them silently.
  write_edge_list(edges, gen.graph, header);

  json truth;
  truth["labels"] = gen.labels;
  truth["k"] = spec.num_groups();
  truth["spec"] = spec_to_json(spec);
  truth["generator"] = params;

  OutputSet files(a.output_dir);
  files.add(a.name + ".txt", edges.str());
  files.add(a.name + ".truth.json", dump(truth));
  auto names = files.names();
  names.push_back("manifest.json");
  files.add("manifest.json", dump(manifest("generate", params, a.seed, "", names)));
  files.commit();

  out << "wrote " << gen.graph.num_nodes() << " nodes, " << gen.graph.num_edges() << " edges, k="
      << spec.num_groups() << " to " << (fs::path(a.output_dir) / (a.name + ".txt")).string() << '\n';
  return 0;
}

// -- bench -------------------------------------------------------------------

struct BenchArgs {
  BenchOptions options;
  std::string model = "sbm";
  std::string ks;
  std::string xs = "2";
  std::string min_sizes;
  std::string init = "random";
  std::string output_dir = default_output_dir();
};

const char* model_name(BenchModel m) {
  switch (m) {
    case BenchModel::sbm: return "sbm";
    case BenchModel::mixed: return "mixed";
    case BenchModel::detectability: return "detectability";
    case BenchModel::dcsbm_powerlaw: return "dcsbm-powerlaw";
  }
  return "?";
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string tok;
  while (std::getline(s, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int cmd_bench(BenchArgs a, std::ostream& out) {
  auto& o = a.options;
  if (a.model == "sbm") o.model = BenchModel::sbm;
  else if (a.model == "mixed") o.model = BenchModel::mixed;
  else if (a.model == "detectability") o.model = BenchModel::detectability;
  else if (a.model == "dcsbm-powerlaw") o.model = BenchModel::dcsbm_powerlaw;
  else throw ConfigError("unknown model '" + a.model + "'");
  if (a.init == "random") o.init = BenchInit::random;
  else if (a.init == "ground-truth") o.init = BenchInit::ground_truth;
  else throw ConfigError("--init must be random or ground-truth");
  o.ks = parse_int_list(a.ks);
  o.xs = parse_double_list(a.xs);
  for (auto v : parse_int_list(a.min_sizes)) o.min_sizes.push_back(v);

  auto rows = run_benchmark(o);

  std::ostringstream csv;
  csv << "model,n,planted_k,x,min_size,graph,inferred_k_mode,fraction_correct\n";
  for (const auto& r : rows) {
    csv << r.model << ',' << r.n << ',' << r.planted_k << ',' << r.x << ',' << r.min_size << ','
        << r.graph << ',' << r.inferred_k_mode << ',' << r.fraction_correct << '\n';
    out << r.model << " n=" << r.n << " k=" << r.planted_k << " -> mode " << r.inferred_k_mode
        << " (fraction correct " << r.fraction_correct << ")\n";
  }
  json params{{"model", a.model},       {"n", o.n},         {"group_size", o.group_size},
              {"c", o.c},               {"in_fraction", o.in_fraction}, {"k", o.ks},
              {"x", o.xs},              {"min_size", o.min_sizes},      {"graphs", o.graphs},
              {"init", a.init},         {"sampler", config_to_json(o.sampler)}};
  OutputSet files(a.output_dir);
  files.add("bench.csv", csv.str());
  files.add("manifest.json", dump(manifest("bench", params, o.sampler.seed, "", {"bench.csv", "manifest.json"})));
  files.commit();
  return 0;
}

void add_sampler_flags(CLI::App* cmd, SamplerConfig& c) {
  cmd->add_option("--sweeps", c.sweeps, "Monte Carlo sweeps per chain (n steps each)")->capture_default_str();
  cmd->add_option("--burnin", c.burn_in_sweeps, "Sweeps discarded before sampling")->capture_default_str();
  cmd->add_option("--chains", c.chains, "Independent chains")->capture_default_str();
  cmd->add_option("--mu", c.mu, "Expected number of new groups in the prior")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

SbmSpec bench_spec(const BenchOptions& o, std::int32_t k, double x) {
  const std::int64_t n = o.group_size > 0 ? o.group_size * k : o.n;
  switch (o.model) {
    case BenchModel::sbm: return planted_partition(n, k, o.c, o.in_fraction);
    case BenchModel::mixed:
      return permute_mixing(planted_partition(n, k, o.c, o.in_fraction), default_mixing_permutation(k));
    case BenchModel::detectability: return spec_from_detectability({n, k, o.c, x});
    case BenchModel::dcsbm_powerlaw: break;
  }
  throw std::logic_error("power-law specs are drawn, not built");
}

std::vector<BenchRow> run_benchmark(const BenchOptions& o) {
  if (o.graphs < 1) throw ConfigError("--graphs must be at least 1");
  struct Point {
    std::int32_t k;
    double x;
    std::int64_t min_size;
  };
  std::vector<Point> grid;
  if (o.model == BenchModel::dcsbm_powerlaw) {
    for (auto s : o.min_sizes) grid.push_back({0, 0.0, s});
  } else if (o.model == BenchModel::detectability) {
    for (auto k : o.ks)
      for (auto x : o.xs) grid.push_back({k, x, 0});
  } else {
    for (auto k : o.ks) grid.push_back({k, 0.0, 0});
  }
  if (grid.empty()) throw ConfigError("benchmark grid is empty");

  std::vector<BenchRow> rows;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (std::int32_t rep = 0; rep < o.graphs; ++rep) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(p) << 20) + static_cast<std::uint64_t>(rep);
      Rng rng = make_stream_rng(o.sampler.seed ^ 0x5bd1e995ULL, stream);
      GeneratedGraph gen;
      std::int32_t planted = grid[p].k;
      if (o.model == BenchModel::dcsbm_powerlaw) {
        PowerLawSpec ps = o.powerlaw;
        ps.n = o.n;
        ps.min_size = grid[p].min_size;
        gen = generate_dcsbm_powerlaw(ps, rng);
        planted = *std::max_element(gen.labels.begin(), gen.labels.end());
      } else {
        gen = generate_sbm(bench_spec(o, grid[p].k, grid[p].x), rng);
      }

      SamplerConfig cfg = o.sampler;
      cfg.seed = o.sampler.seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
      if (o.init == BenchInit::ground_truth) cfg.initial_labels = gen.labels;
      auto chains = run_chains(gen.graph, cfg);
      auto summary = summarize(gen.graph, chains);

      BenchRow row;
      row.model = model_name(o.model);
      row.n = gen.graph.num_nodes();
      row.planted_k = planted;
      row.x = grid[p].x;
      row.min_size = grid[p].min_size;
      row.graph = rep;
      row.inferred_k_mode = summary.k_mode;
      std::int32_t correct = 0;
      for (const auto& c : summary.per_chain) correct += c.k_mode == planted;
      row.fraction_correct = static_cast<double>(correct) / static_cast<double>(summary.per_chain.size());
      rows.push_back(row);
    }
  }
  return rows;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Posterior over the number of communities in a network"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  InferArgs infer;
  auto* ci = app.add_subcommand("infer", "Sample P(k|A) for an edge list");
  ci->add_option("--input", infer.input, "Edge list file")->required()->check(CLI::ExistingFile);
  ci->add_option("--output-dir", infer.output_dir, "Directory for outputs (default $NCOMM_OUTPUT_DIR or .)");
  ci->add_option("--init-labels", infer.init_labels, "Start every chain from a ground-truth JSON file");
  ci->add_flag("--map", infer.write_map, "Also write the MAP partition as CSV");
  ci->add_flag("--omega", infer.write_omega, "Also write omega_hat and the meta-network as CSV");
  add_sampler_flags(ci, infer.config);

  GenerateArgs gen;
  auto* cg = app.add_subcommand("generate", "Write a synthetic benchmark network");
  cg->add_option("--model", gen.model, "sbm | mixed | detectability | dcsbm-powerlaw")->capture_default_str();
  cg->add_option("--n", gen.n, "Number of nodes")->capture_default_str();
  cg->add_option("--k", gen.k, "Number of planted groups")->capture_default_str();
  cg->add_option("--group-size", gen.group_size, "Fixed group size (overrides --n)");
  cg->add_option("--c", gen.c, "Mean degree")->capture_default_str();
  cg->add_option("--in-fraction", gen.in_fraction, "Fraction of degree inside the group")->capture_default_str();
  cg->add_option("--x", gen.x, "Normalized mixing (detectability model)")->capture_default_str();
  cg->add_option("--perm", gen.perm, "Comma-separated 1-based row permutation (mixed model)");
  cg->add_option("--min-size", gen.powerlaw.min_size, "Minimum community size")->capture_default_str();
  cg->add_option("--size-ratio", gen.powerlaw.size_ratio, "Max/min community size")->capture_default_str();
  cg->add_option("--size-exponent", gen.powerlaw.size_exponent)->capture_default_str();
  cg->add_option("--degree-exponent", gen.powerlaw.degree_exponent)->capture_default_str();
  cg->add_option("--mean-degree", gen.powerlaw.mean_degree)->capture_default_str();
  cg->add_option("--max-degree", gen.powerlaw.max_degree)->capture_default_str();
  cg->add_option("--mixing", gen.powerlaw.mixing, "Fraction of degree leaving the group")->capture_default_str();
  cg->add_option("--seed", gen.seed)->capture_default_str();
  cg->add_option("--output-dir", gen.output_dir);
  cg->add_option("--name", gen.name, "Base name of the output files")->capture_default_str();

  BenchArgs bench;
  auto* cb = app.add_subcommand("bench", "Generate-and-infer sweep over a parameter grid");
  cb->add_option("--model", bench.model, "sbm | mixed | detectability | dcsbm-powerlaw")->capture_default_str();
  cb->add_option("--k", bench.ks, "Comma-separated planted k values");
  cb->add_option("--x", bench.xs, "Comma-separated mixing values (detectability)")->capture_default_str();
  cb->add_option("--min-size", bench.min_sizes, "Comma-separated minimum sizes (dcsbm-powerlaw)");
  cb->add_option("--n", bench.options.n)->capture_default_str();
  cb->add_option("--group-size", bench.options.group_size);
  cb->add_option("--c", bench.options.c)->capture_default_str();
  cb->add_option("--in-fraction", bench.options.in_fraction)->capture_default_str();
  cb->add_option("--mixing", bench.options.powerlaw.mixing)->capture_default_str();
  cb->add_option("--graphs", bench.options.graphs, "Graphs per grid point")->capture_default_str();
  cb->add_option("--init", bench.init, "random | ground-truth")->capture_default_str();
  cb->add_option("--output-dir", bench.output_dir);
  add_sampler_flags(cb, bench.options.sampler);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (ci->parsed()) return cmd_infer(infer, out);
    if (cg->parsed()) return cmd_generate(gen, out);
    if (cb->parsed()) return cmd_bench(bench, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ncomm
