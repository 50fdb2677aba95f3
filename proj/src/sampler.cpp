#include "ncomm/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "ncomm/analysis.hpp"

namespace ncomm {

void SamplerConfig::validate(std::int64_t n) const {
  if (n < 3) throw ConfigError("inference needs a graph with at least 3 nodes");
  if (sweeps < 1) throw ConfigError("sweeps must be positive");
  if (burn_in_sweeps < 0) throw ConfigError("burn-in must be non-negative");
  if (burn_in_sweeps >= sweeps)
    throw ConfigError("burn-in (" + std::to_string(burn_in_sweeps) +
                      ") must be smaller than sweeps (" + std::to_string(sweeps) + ")");
  if (chains < 1) throw ConfigError("chains must be at least 1");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (!(mu > 0.0) || !(mu < static_cast<double>(n - 1)))
    throw ConfigError("mu must satisfy 0 < mu < n-1");
  if (!(init_mu_max > 0.0)) throw ConfigError("initial mu range must be positive");
  if (!initial_labels.empty() && initial_labels.size() != static_cast<std::size_t>(n))
    throw ConfigError("initial assignment length does not match the graph");
}

std::optional<Move> propose(const PartitionState& state, double type2_prob, Rng& rng) {
  const GroupId k = state.num_groups();
  if (uniform_unit(rng) >= type2_prob) {
    if (k == 1) return std::nullopt;
    GroupId r = uniform_index(rng, k);
    GroupId s = uniform_index(rng, k - 1);
    if (s >= r) ++s;
    return state.type1_move(state.random_member(r, rng), s);
  }
  // Ordered pair (r, s) over labels 0..k, where label k is the fresh one.
  // Group r is relabelled k and the new group takes r, so a source label of
  // k refers to what used to be r.
  GroupId r = uniform_index(rng, k + 1);
  GroupId s = uniform_index(rng, k);
  if (s >= r) ++s;
  GroupId source = (s == k) ? r : s;
  return state.type2_move(state.random_member(source, rng));
}

double proposal_probability(const PartitionState& state, const Move& move, double type2_prob) {
  const double k = state.num_groups();
  const double nr = static_cast<double>(state.size(move.from));
  if (move.kind == MoveKind::type1) return (1.0 - type2_prob) / (k * (k - 1.0) * nr);
  return type2_prob / (k * nr);
}

bool accept_move(double delta, Rng& rng) {
  if (delta >= 0.0) return true;
  if (!(delta > -INFINITY)) return false;
  return uniform_unit(rng) < std::exp(delta);
}

double log_posterior(const LikelihoodTables& tables, const PartitionState& state,
                     const PriorParams& prior) {
  const GroupId k = state.num_groups();
  double lp = -static_cast<double>(k) * prior.log_group_penalty(state.num_nodes());
  for (GroupId r = 0; r < k; ++r) lp += tables.lnfact(state.size(r));
  return lp + log_marginal_likelihood(tables, state);
}

namespace {

PartitionState initial_state(const Graph& graph, const SamplerConfig& config, Rng& rng,
                             ChainResult& out) {
  const NodeId n = graph.num_nodes();
  if (!config.initial_labels.empty()) {
    out.initial_mu = 0.0;
    auto st = PartitionState::from_labels(graph, config.initial_labels);
    out.initial_k = st.num_groups();
    return st;
  }
  const double hi = std::min(config.init_mu_max, static_cast<double>(n - 2));
  double mu0 = 0.0;
  while (mu0 <= 0.0) mu0 = std::uniform_real_distribution<double>(0.0, hi)(rng);
  auto draw = sample_partition_queueing(n, mu0, rng);
  out.initial_mu = mu0;
  out.initial_k = draw.k;
  return PartitionState::from_labels(graph, draw.labels);
}

}  // namespace

ChainResult run_chain(const Graph& graph, const LikelihoodTables& tables,
                      const SamplerConfig& config, std::int32_t chain_index) {
  const NodeId n = graph.num_nodes();
  config.validate(n);

  ChainResult out;
  out.chain = chain_index;
  out.burn_in_sweeps = config.burn_in_sweeps;
  Rng rng = make_stream_rng(config.seed, static_cast<std::uint64_t>(chain_index));
  PartitionState state = initial_state(graph, config, rng, out);

  const PriorParams prior{config.mu};
  const double q2 = type2_probability(n, config.mu);
  NeighborCounts counts = state.make_counts();
  std::vector<std::int64_t> sizes;

  out.k_trace.reserve(config.sweeps);
  out.keff_trace.reserve(config.sweeps);
  out.log_posterior_trace.reserve(config.sweeps);

  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t sweep = 0; sweep < config.sweeps; ++sweep) {
    for (NodeId step = 0; step < n; ++step) {
      auto move = propose(state, q2, rng);
      if (!move) continue;
      ++out.proposed;
      state.count_neighbors(move->node, counts);
      double delta = log_likelihood_ratio(tables, state, *move, counts);
      if (accept_move(delta, rng)) {
        state.apply(*move, counts);
        ++out.accepted;
      }
      state.clear(counts);
    }

    const GroupId k = state.num_groups();
    sizes.assign(k, 0);
    for (GroupId r = 0; r < k; ++r) sizes[r] = state.size(r);
    const double lp = log_posterior(tables, state, prior);
    out.k_trace.push_back(k);
    out.keff_trace.push_back(k_eff(sizes));
    out.log_posterior_trace.push_back(lp);
    if (config.record_map && lp > out.map_log_posterior) {
      out.map_log_posterior = lp;
      out.map_labels = state.labels();
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out.steps = config.sweeps * static_cast<std::int64_t>(n);
  out.acceptance_rate =
      out.proposed > 0 ? static_cast<double>(out.accepted) / static_cast<double>(out.proposed) : 0.0;
  out.steps_per_second = elapsed > 0.0 ? static_cast<double>(out.steps) / elapsed : 0.0;
  return out;
}

ChainResult run_chain(const Graph& graph, const SamplerConfig& config, std::int32_t chain_index) {
  config.validate(graph.num_nodes());
  LikelihoodTables tables(graph);
  return run_chain(graph, tables, config, chain_index);
}

std::vector<ChainResult> run_chains(const Graph& graph, const SamplerConfig& config) {
  config.validate(graph.num_nodes());
  const LikelihoodTables tables(graph);
  std::vector<ChainResult> results(static_cast<std::size_t>(config.chains));

  std::int32_t workers = config.threads > 0
                             ? config.threads
                             : static_cast<std::int32_t>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.chains);
  if (workers == 1) {
    for (std::int32_t c = 0; c < config.chains; ++c) results[c] = run_chain(graph, tables, config, c);
    return results;
  }

  std::atomic<std::int32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::int32_t c = next++; c < config.chains; c = next++) {
      try {
        results[c] = run_chain(graph, tables, config, c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::int32_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace ncomm
