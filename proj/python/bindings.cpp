#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ncomm/analysis.hpp"
#include "ncomm/generators.hpp"
#include "ncomm/graph.hpp"
#include "ncomm/likelihood.hpp"
#include "ncomm/prior.hpp"
#include "ncomm/report.hpp"
#include "ncomm/sampler.hpp"

namespace py = pybind11;
using namespace ncomm;

namespace {

Graph graph_from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  for (auto [u, v] : edges)
    if (u < 0 || v < 0 || u >= n || v >= n) throw py::index_error("edge endpoint out of range");
  return Graph::from_edges(n, edges);
}

Graph graph_from_text(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

PartitionState state_for(const Graph& g, const std::vector<std::int32_t>& labels) {
  return PartitionState::from_labels(g, labels);
}

py::tuple generated(GeneratedGraph gen) {
  return py::make_tuple(std::move(gen.graph), std::move(gen.labels));
}

std::string infer_json(const Graph& g, std::int64_t sweeps, std::int64_t burn_in, std::int32_t chains, double mu,
                       std::uint64_t seed, std::int32_t threads, std::vector<std::int32_t> initial_labels) {
  SamplerConfig config;
  config.sweeps = sweeps;
  config.burn_in_sweeps = burn_in;
  config.chains = chains;
  config.mu = mu;
  config.seed = seed;
  config.threads = threads;
  config.initial_labels = std::move(initial_labels);
  std::vector<ChainResult> results;
  {
    py::gil_scoped_release release;
    results = run_chains(g, config);
  }
  auto summary = summarize(g, results);
  auto doc = summary_to_json(summary, config_to_json(config));
  json traces = json::array();
  for (const auto& r : results) traces.push_back({{"chain", r.chain}, {"k", r.k_trace}, {"keff", r.keff_trace}});
  doc["traces"] = traces;
  return doc.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Posterior over the number of communities in a network";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def_static("from_edges", &graph_from_edges, py::arg("n"), py::arg("edges"))
      .def_static("from_text", &graph_from_text, py::arg("text"))
      .def_static("load", &load_edge_list_file, py::arg("path"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edge_density", &Graph::edge_density)
      .def_property_readonly("degrees", [](const Graph& g) {
        return std::vector<std::int64_t>(g.degrees().begin(), g.degrees().end());
      })
      .def_property_readonly("labels", [](const Graph& g) {
        return std::vector<std::string>(g.labels().begin(), g.labels().end());
      })
      .def("edges", &Graph::edge_list)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges()) + ">";
      });

  m.def("log_marginal_likelihood",
        [](const Graph& g, const std::vector<std::int32_t>& labels) {
          return log_marginal_likelihood(g, state_for(g, labels));
        },
        py::arg("graph"), py::arg("labels"), "ln P(A|g,k) up to a graph-only constant; labels are 1-based.");
  m.def("log_prior",
        [](const Graph& g, const std::vector<std::int32_t>& labels, double mu) {
          return log_prior_working(state_for(g, labels), PriorParams{mu});
        },
        py::arg("graph"), py::arg("labels"), py::arg("mu") = 1.0);
  m.def("prior_k_pmf", &prior_k_pmf, py::arg("n"), py::arg("q"), py::arg("k"));
  m.def("sample_partition_queueing",
        [](std::int64_t n, double mu, std::uint64_t seed) {
          Rng rng = make_stream_rng(seed, 0);
          auto d = sample_partition_queueing(n, mu, rng);
          return py::make_tuple(d.labels, d.k);
        },
        py::arg("n"), py::arg("mu") = 1.0, py::arg("seed") = 1);
  m.def("k_eff", [](const std::vector<std::int64_t>& sizes) { return k_eff(sizes); }, py::arg("sizes"));
  m.def("omega_hat",
        [](const Graph& g, const std::vector<std::int32_t>& labels) { return omega_hat(state_for(g, labels)); },
        py::arg("graph"), py::arg("labels"));

  m.def("_infer_json", &infer_json, py::arg("graph"), py::arg("sweeps"), py::arg("burn_in"), py::arg("chains"),
        py::arg("mu"), py::arg("seed"), py::arg("threads"), py::arg("initial_labels"));

  m.def("planted_partition",
        [](std::int64_t n, std::int32_t k, double c, double in_fraction, std::uint64_t seed) {
          Rng rng = make_stream_rng(seed, 0);
          return generated(generate_sbm(planted_partition(n, k, c, in_fraction), rng));
        },
        py::arg("n"), py::arg("k"), py::arg("c"), py::arg("in_fraction") = 0.9, py::arg("seed") = 1);
  m.def("detectability_graph",
        [](std::int64_t n, std::int32_t k, double c, double x, std::uint64_t seed) {
          Rng rng = make_stream_rng(seed, 0);
          return generated(generate_sbm(spec_from_detectability({n, k, c, x}), rng));
        },
        py::arg("n"), py::arg("k"), py::arg("c"), py::arg("x"), py::arg("seed") = 1);
  m.def("powerlaw_graph",
        [](std::int64_t n, std::int64_t min_size, double mixing, std::uint64_t seed) {
          PowerLawSpec spec;
          spec.n = n;
          spec.min_size = min_size;
          spec.mixing = mixing;
          Rng rng = make_stream_rng(seed, 0);
          return generated(generate_dcsbm_powerlaw(spec, rng));
        },
        py::arg("n") = 1000, py::arg("min_size") = 20, py::arg("mixing") = 0.1, py::arg("seed") = 1);
}
