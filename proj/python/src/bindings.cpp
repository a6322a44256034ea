#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gnutellab/analysis.hpp"
#include "gnutellab/crawler.hpp"
#include "gnutellab/generators.hpp"
#include "gnutellab/graph_io.hpp"
#include "gnutellab/labels.hpp"
#include "gnutellab/metrics.hpp"
#include "gnutellab/mismatch.hpp"
#include "gnutellab/simulator.hpp"

namespace py = pybind11;
using namespace gnutellab;

namespace {

DegreeDistribution to_distribution(const std::map<std::size_t, std::uint64_t>& counts) {
  return DegreeDistribution{counts};
}

py::dict fit_dict(const PowerLawFit& f) {
  py::dict d;
  d["exponent_k"] = f.exponent_k;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["residual"] = f.residual;
  d["fit_min"] = f.fit_min;
  d["fit_max"] = f.fit_max;
  return d;
}

LabelField parse_field(const std::string& name) {
  if (name == "domain") return LabelField::Domain;
  if (name == "as") return LabelField::As;
  throw InvalidArgument("field must be 'domain' or 'as'");
}

SimConfig sim_config(const std::string& preset, std::uint64_t seed, std::optional<std::size_t> population,
                     std::optional<double> duration) {
  SimConfig cfg = sim_preset(preset);
  cfg.seed = seed;
  if (population) cfg.target_population = *population;
  if (duration) cfg.duration = *duration;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gnutella overlay simulation and analysis";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<OverlayGraph>(m, "OverlayGraph")
      .def(py::init<>())
      .def("add_node", [](OverlayGraph& g) { return g.add_node(); })
      .def("add_edge", &OverlayGraph::add_edge)
      .def("remove_node", &OverlayGraph::remove_node)
      .def("has_edge", &OverlayGraph::has_edge)
      .def("degree", &OverlayGraph::degree)
      .def("neighbors", [](const OverlayGraph& g, NodeId id) {
        auto s = g.neighbors(id);
        return std::vector<NodeId>(s.begin(), s.end());
      })
      .def("nodes", &OverlayGraph::nodes)
      .def("edges", &OverlayGraph::edges)
      .def("label", [](const OverlayGraph& g, NodeId id, const std::string& field) {
        return node_label(g, id, parse_field(field));
      }, py::arg("id"), py::arg("field") = "domain")
      .def_property_readonly("node_count", &OverlayGraph::node_count)
      .def_property_readonly("edge_count", &OverlayGraph::edge_count)
      .def("__len__", &OverlayGraph::node_count)
      .def("__eq__", [](const OverlayGraph& a, const OverlayGraph& b) { return a == b; });

  m.def("load_graph", &load_graph, py::arg("path"));
  m.def("save_graph", &save_graph, py::arg("graph"), py::arg("path"));

  m.def("generate_preferential_attachment", &generate_preferential_attachment, py::arg("n"), py::arg("m"),
        py::arg("seed") = 1);
  m.def("generate_multimodal",
        [](std::size_t n, std::size_t knee, double tail_exponent, double avg_connections, std::uint64_t seed) {
          return generate_multimodal(MultimodalParams{n, knee, tail_exponent, avg_connections, seed});
        },
        py::arg("n"), py::arg("knee") = 10, py::arg("tail_exponent") = 2.3, py::arg("avg_connections") = 3.4,
        py::arg("seed") = 1);

  m.def("assign_independent_labels",
        [](OverlayGraph& g, const LabelWeights& domains, const LabelWeights& ases, std::uint64_t seed) {
          assign_labels(g, IndependentLabels{domains, ases}, seed);
        },
        py::arg("graph"), py::arg("domains"), py::arg("ases"), py::arg("seed") = 1);
  m.def("assign_correlated_labels",
        [](OverlayGraph& g, double locality, std::uint64_t seed) { assign_labels(g, CorrelatedLabels{locality}, seed); },
        py::arg("graph"), py::arg("locality") = 1.0, py::arg("seed") = 1);

  m.def("degree_distribution", [](const OverlayGraph& g) { return degree_distribution(g).counts; });
  m.def("largest_component_fraction", &largest_component_fraction);
  m.def("connected_components", &connected_components);
  m.def("average_connections_per_node", &average_connections_per_node);
  m.def("mean_degree", &mean_degree);
  m.def("path_length_distribution",
        [](const OverlayGraph& g, std::optional<std::size_t> sources, std::uint64_t seed) {
          const PathMode mode = sources ? PathMode{SampledPaths{*sources, seed}} : PathMode{ExactPaths{}};
          const auto d = path_length_distribution(g, mode);
          py::dict out;
          out["counts"] = d.counts;
          out["p95"] = d.percentile(0.95);
          out["max"] = d.max_distance();
          out["unreachable_pairs"] = d.unreachable_pairs;
          return out;
        },
        py::arg("graph"), py::arg("sources") = py::none(), py::arg("seed") = 1);

  m.def("fit_power_law",
        [](const std::map<std::size_t, std::uint64_t>& counts, std::size_t min_degree, std::size_t max_degree) {
          return fit_dict(fit_power_law(to_distribution(counts), min_degree, max_degree));
        },
        py::arg("counts"), py::arg("min_degree") = 1,
        py::arg("max_degree") = std::numeric_limits<std::size_t>::max());
  m.def("fit_multimodal", [](const std::map<std::size_t, std::uint64_t>& counts) {
    const auto f = fit_multimodal(to_distribution(counts));
    py::dict d;
    d["knee"] = f.knee;
    d["head_level"] = f.head_level;
    d["head_flatness"] = f.head_flatness;
    d["degenerate_head"] = f.degenerate_head;
    d["tail"] = fit_dict(f.tail);
    return d;
  });
  m.def("robustness_experiment",
        [](const OverlayGraph& g, const std::string& strategy, std::vector<double> fractions, std::uint64_t seed) {
          std::vector<std::pair<double, double>> out;
          for (const auto& p : robustness_experiment(g, parse_removal_strategy(strategy), std::move(fractions), seed).points)
            out.emplace_back(p.removed_fraction, p.largest_component_fraction);
          return out;
        },
        py::arg("graph"), py::arg("strategy"), py::arg("fractions"), py::arg("seed") = 1);
  m.def("traffic_estimate", [](double connections, double per_connection_bps) {
    const auto t = traffic_estimate(connections, per_connection_bps);
    py::dict d;
    d["aggregate_bps"] = t.aggregate_bps;
    d["bytes_per_month"] = t.bytes_per_month;
    d["terabytes_per_month"] = t.terabytes_per_month();
    return d;
  });

  m.def("flood",
        [](const OverlayGraph& g, NodeId source, const std::string& kind, int ttl) {
          const FloodTrace t = flood(g, source, parse_message_kind(kind), ttl);
          py::dict d;
          std::map<std::string, std::uint64_t> by_kind;
          for (MessageKind k : kAllKinds)
            if (auto n = t.transmission_count(k)) by_kind[std::string(to_string(k))] = n;
          d["transmissions"] = by_kind;
          d["duplicates"] = t.duplicates;
          std::vector<std::pair<NodeId, int>> replies;
          for (const auto& r : t.replies) replies.emplace_back(r.responder, r.hops);
          d["replies"] = replies;
          return d;
        },
        py::arg("graph"), py::arg("source"), py::arg("kind") = "PING", py::arg("ttl") = 7);

  m.def("calibrate_churn",
        [](std::pair<double, double> q1, std::pair<double, double> q2) {
          const auto c = calibrate_churn({q1.first, q1.second}, {q2.first, q2.second});
          return std::make_pair(c.shape, c.scale_hours);
        },
        py::arg("q1"), py::arg("q2"));

  m.def("sim_presets", &sim_preset_names);
  m.def("simulate",
        [](const std::string& preset, std::uint64_t seed, std::optional<std::size_t> population,
           std::optional<double> duration) {
          const SimReport r = run(sim_config(preset, seed, population, duration));
          const TrafficReport t = traffic_report(r);
          py::dict d, messages, bytes;
          for (MessageKind k : kAllKinds) {
            messages[py::str(std::string(to_string(k)))] = t.messages(k);
            bytes[py::str(std::string(to_string(k)))] = t.bytes(k);
          }
          d["total_messages"] = t.total_messages;
          d["message_fraction"] = messages;
          d["byte_fraction"] = bytes;
          d["sessions"] = r.sessions.size();
          return d;
        },
        py::arg("preset"), py::arg("seed") = 1, py::arg("population") = py::none(),
        py::arg("duration") = py::none());

  m.def("crawl_static",
        [](const OverlayGraph& g, std::vector<NodeId> seeds, std::size_t workers,
           std::map<NodeId, std::size_t> limits) {
          StaticNetwork net(g, std::move(limits));
          CrawlConfig cfg;
          cfg.initial_nodes = std::move(seeds);
          cfg.workers = workers;
          return crawl(net, cfg).graph;
        },
        py::arg("graph"), py::arg("seeds"), py::arg("workers") = 1,
        py::arg("limits") = std::map<NodeId, std::size_t>{});

  m.def("label_entropy", py::overload_cast<const std::vector<std::string>&>(&label_entropy));
  m.def("clustering_entropy",
        [](const std::vector<std::vector<NodeId>>& clusters, const std::vector<std::string>& labels) {
          return clustering_entropy(ClusterPartition{clusters, std::nullopt}, labels);
        },
        py::arg("clusters"), py::arg("labels"));
  m.def("entropy_reduction",
        [](const OverlayGraph& g, std::size_t hub_threshold, const std::string& field) {
          return entropy_reduction(g, hub_threshold, parse_field(field));
        },
        py::arg("graph"), py::arg("hub_threshold") = 10, py::arg("field") = "domain");
  m.def("intra_as_fraction", &intra_as_fraction);
  m.def("link_stress_example", [](bool crossed) {
    const StressExample ex = two_site_example(crossed);
    const StressReport r = link_stress(ex.overlay, ex.underlay, ex.placement, ex.source, 7);
    std::map<std::string, std::uint64_t> out;
    for (auto [link, n] : r.counts) out[ex.underlay.name(link.first) + "-" + ex.underlay.name(link.second)] = n;
    return out;
  }, py::arg("crossed"));
}
