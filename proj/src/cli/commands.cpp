#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <sstream>

#include "commands.hpp"
#include "gnutellab/analysis.hpp"
#include "gnutellab/cli.hpp"
#include "gnutellab/crawler.hpp"
#include "gnutellab/csv.hpp"
#include "gnutellab/generators.hpp"
#include "gnutellab/graph_io.hpp"
#include "gnutellab/labels.hpp"
#include "gnutellab/metrics.hpp"
#include "gnutellab/mismatch.hpp"
#include "gnutellab/simulator.hpp"

namespace fs = std::filesystem;

namespace gnutellab::cli {
namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct GenerateOptions {
  std::string model = "multimodal";
  std::size_t n = 0;
  std::size_t m = 2;
  std::size_t knee = 10;
  double tail_exponent = 2.3;
  double avg_connections = 3.4;
  std::string labels = "none";
  std::size_t domains = 50;
  std::size_t ases = 200;
  double top_as_mass = 0.4;
  double locality = 0.001;
  std::string output;
};

struct SimulateOptions {
  std::string preset;
  std::size_t population = 0;
  double duration = 0.0;
  double ping_period = 0.0;
  double query_rate = -1.0;
  int ttl = 0;
  std::size_t known_hosts = 0;
  bool churn = false;
  std::vector<double> churn_short = {4.0, 0.40};
  std::vector<double> churn_long = {24.0, 0.75};
  double hub_boost = 1.0;
  std::vector<double> snapshot_hours;
  double connectivity_interval = 0.0;
};

struct CrawlOptions {
  std::string graph;
  std::string preset;
  double start_hours = 6.0;
  std::size_t seed_count = 20;
  std::size_t workers = 1;
  std::size_t batch = 1;
  std::size_t invasiveness_cap = 50;
  double connect_timeout = 20.0;
  double listen_timeout = 30.0;
  std::vector<NodeId> seeds;
};

struct AnalyzeOptions {
  std::string graph;
  std::string traffic;
  std::size_t min_degree = 10;
  double per_connection_bps = 6000.0;
  std::vector<double> fractions = {0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::size_t path_sources = 1000;
};

struct MismatchOptions {
  std::string graph;
  std::size_t hub_threshold = 10;
  double overlap = 0.25;
  std::string stress_example;
};

struct ReportOptions {
  std::vector<std::string> inputs;
};

// Resolved options of the top level and the chosen subcommand, in a form
// --config reads back.
void write_sidecar(const CLI::App& app, const std::string& sub, const fs::path& path) {
  std::istringstream all(app.config_to_str(true, false));
  auto out = open_output(path);
  for (std::string line; std::getline(all, line);) {
    const auto eq = line.find('=');
    const auto dot = line.find('.');
    if (dot == std::string::npos || dot > eq || line.compare(0, dot, sub) == 0) out << line << "\n";
  }
}

void cmd_generate(const GenerateOptions& o, const Common& c, std::ostream& log) {
  OverlayGraph g;
  if (o.model == "ba") {
    g = generate_preferential_attachment(o.n, o.m, c.seed);
  } else if (o.model == "multimodal") {
    g = generate_multimodal(MultimodalParams{o.n, o.knee, o.tail_exponent, o.avg_connections, c.seed});
  } else {
    throw InvalidArgument("model: unknown generator '" + o.model + "'");
  }
  if (o.labels == "independent") {
    assign_labels(g,
                  IndependentLabels{zipf_weights("domain", o.domains, 1.0),
                                    top_heavy_weights("AS", o.ases, 10, o.top_as_mass)},
                  c.seed + 1);
  } else if (o.labels == "correlated") {
    assign_labels(g, CorrelatedLabels{o.locality}, c.seed + 1);
  } else if (o.labels != "none") {
    throw InvalidArgument("labels: unknown scheme '" + o.labels + "'");
  }
  const fs::path path = o.output.empty() ? fs::path(c.out) / "graph.graph" : fs::path(o.output);
  save_graph(g, path);
  log << "wrote " << path.string() << " (" << g.node_count() << " nodes, " << g.edge_count()
      << " edges)\n";
}

SimConfig simulation_config(const SimulateOptions& o, const CLI::App& sub, const Common& c) {
  SimConfig cfg = o.preset.empty() ? SimConfig{} : sim_preset(o.preset);
  cfg.seed = c.seed;
  if (sub.count("--population")) cfg.target_population = o.population;
  if (sub.count("--duration")) cfg.duration = o.duration;
  if (sub.count("--ping-period")) cfg.ping_period = o.ping_period;
  if (sub.count("--query-rate")) cfg.query_rate = o.query_rate;
  if (sub.count("--ttl")) cfg.initial_ttl = o.ttl;
  if (sub.count("--known-hosts")) cfg.known_hosts = o.known_hosts;
  if (o.churn || sub.count("--churn-short") || sub.count("--churn-long")) {
    const double boost = cfg.churn.hub_availability_boost;
    cfg.churn = calibrate_churn({o.churn_short[0], o.churn_short[1]}, {o.churn_long[0], o.churn_long[1]});
    cfg.churn.hub_availability_boost = boost;
  }
  if (sub.count("--hub-boost")) cfg.churn.hub_availability_boost = o.hub_boost;
  if (sub.count("--snapshot-hours")) {
    cfg.snapshot_times.clear();
    for (double h : o.snapshot_hours) cfg.snapshot_times.push_back(h * 3600.0);
  }
  if (sub.count("--connectivity-interval")) cfg.connectivity_interval = o.connectivity_interval;
  return cfg;
}

void cmd_simulate(const SimulateOptions& o, const CLI::App& sub, const Common& c, std::ostream& log) {
  const SimConfig cfg = simulation_config(o, sub, c);
  const SimReport report = run(cfg);
  export_report(report, c.out);
  const TrafficReport t = traffic_report(report);
  log << "messages " << t.total_messages << ", bytes " << t.total_bytes << "\n";
  for (MessageKind k : kAllKinds) {
    log << "  " << to_string(k) << " " << format_real(t.messages(k)) << " of messages, "
        << format_real(t.bytes(k)) << " of bytes\n";
  }
}

void cmd_crawl(const CrawlOptions& o, const Common& c, std::ostream& log) {
  CrawlConfig cc;
  cc.workers = o.workers;
  cc.batch_size = o.batch;
  cc.invasiveness_cap = o.invasiveness_cap;
  cc.connect_timeout = o.connect_timeout;
  cc.listen_timeout = o.listen_timeout;
  cc.initial_nodes = o.seeds;
  const fs::path out(c.out);
  CrawlSnapshot snap;
  if (!o.graph.empty() == !o.preset.empty()) {
    throw InvalidArgument("crawl: give exactly one of --graph or --preset");
  }
  if (!o.graph.empty()) {
    OverlayGraph g = load_graph(o.graph);
    if (cc.initial_nodes.empty()) cc.initial_nodes = g.nodes();
    StaticNetwork net(std::move(g));
    snap = crawl(net, cc);
  } else {
    SimConfig cfg = sim_preset(o.preset);
    cfg.seed = c.seed;
    Simulation sim(cfg);
    sim.advance_to(o.start_hours * 3600.0);
    if (cc.initial_nodes.empty()) {
      for (NodeId id : sim.alive_nodes()) {
        if (cc.initial_nodes.size() >= o.seed_count) break;
        const ServentState* s = sim.servent(id);
        if (s && !s->at_capacity()) cc.initial_nodes.push_back(id);
      }
    }
    SimulatedNetwork truth_net(sim);
    SimulatedNetwork net(std::move(sim));
    snap = crawl(net, cc);
    truth_net.advance_to(snap.midpoint());
    const FidelityReport f = snapshot_fidelity(truth_net.truth(), snap.graph);
    auto fo = open_output(out / "fidelity.csv");
    CsvWriter csv(fo);
    csv.cells("node_recall", "edge_recall", "degree_distance");
    csv.cells(f.node_recall, f.edge_recall, f.degree_distance);
  }
  save_graph(snap.graph, out / "snapshot.graph");
  {
    auto meta = open_output(out / "meta.csv");
    write_crawl_meta_csv(snap, meta);
  }
  {
    auto ro = open_output(out / "reported_only.csv");
    CsvWriter csv(ro);
    csv.cells("address", "port");
    for (const auto& info : snap.reported_only) csv.cells(info.address, info.port);
  }
  for (const auto& d : snap.diagnostics) log << "warning: " << d << "\n";
  log << "confirmed " << snap.graph.node_count() << " nodes, " << snap.graph.edge_count()
      << " edges, " << snap.reported_only.size() << " reported only\n";
}

void cmd_analyze(const AnalyzeOptions& o, const Common& c, std::ostream& log) {
  const fs::path out(c.out);
  if (o.graph.empty() && o.traffic.empty()) {
    throw InvalidArgument("analyze: give --graph and/or --traffic");
  }
  if (!o.traffic.empty()) {
    const CsvTable t = load_csv(o.traffic);
    SimReport r;
    const std::size_t kind = t.column("kind"), count = t.column("count"), bytes = t.column("bytes");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto k = static_cast<std::size_t>(parse_message_kind(t.rows[i][kind]));
      r.traffic[k].count = parse_count(t.rows[i][count], t.source, i + 2);
      r.traffic[k].bytes = parse_count(t.rows[i][bytes], t.source, i + 2);
    }
    const TrafficReport tr = traffic_report(r);
    auto f = open_output(out / "traffic_summary.csv");
    CsvWriter csv(f);
    csv.cells("kind", "count", "bytes", "message_fraction", "byte_fraction");
    for (MessageKind k : kAllKinds) {
      csv.cells(to_string(k), r.tally(k).count, r.tally(k).bytes, tr.messages(k), tr.bytes(k));
    }
    log << "QUERY message fraction " << format_real(tr.messages(MessageKind::Query)) << "\n";
  }
  if (o.graph.empty()) return;

  const OverlayGraph g = load_graph(o.graph);
  const DegreeDistribution dd = degree_distribution(g);
  const PathMode mode = g.node_count() < kExactPathNodeLimit
                            ? PathMode{ExactPaths{}}
                            : PathMode{SampledPaths{o.path_sources, c.seed}};
  const PathLengthDistribution paths = path_length_distribution(g, mode);
  {
    auto f = open_output(out / "degree.csv");
    write_degree_csv(dd, f);
  }
  {
    auto f = open_output(out / "paths.csv");
    write_path_csv(paths, f);
  }
  std::optional<PowerLawFit> tail;
  std::optional<MultiModalFit> mm;
  try {
    tail = fit_power_law(dd, o.min_degree);
  } catch (const InvalidArgument& e) {
    log << "warning: power-law fit skipped: " << e.what() << "\n";
  }
  try {
    mm = fit_multimodal(dd);
  } catch (const InvalidArgument& e) {
    log << "warning: multimodal fit skipped: " << e.what() << "\n";
  }
  {
    auto f = open_output(out / "fits.csv");
    CsvWriter csv(f);
    csv.cells("fit", "exponent_k", "intercept", "r_squared", "fit_min", "fit_max");
    if (tail) csv.cells("power_law", tail->exponent_k, tail->intercept, tail->r_squared, tail->fit_min, tail->fit_max);
    if (mm) {
      csv.cells("multimodal_tail", mm->tail.exponent_k, mm->tail.intercept, mm->tail.r_squared,
                mm->tail.fit_min, mm->tail.fit_max);
    }
  }
  if (mm) {
    auto f = open_output(out / "multimodal.csv");
    write_multimodal_csv(*mm, f);
  }
  {
    auto f = open_output(out / "robustness.csv");
    write_robustness_csv(robustness_experiment(g, RemovalStrategy::Random, o.fractions, c.seed), f);
    std::ostringstream targeted;
    write_robustness_csv(robustness_experiment(g, RemovalStrategy::Targeted, o.fractions, c.seed), targeted);
    const std::string body = targeted.str();
    f << body.substr(body.find('\n') + 1);
  }
  {
    auto f = open_output(out / "traffic_estimate.csv");
    CsvWriter csv(f);
    const TrafficEstimate t =
        traffic_estimate(static_cast<double>(g.edge_count()), o.per_connection_bps);
    csv.cells("connections", "per_connection_bps", "aggregate_bps", "bytes_per_month");
    csv.cells(t.connections, t.per_connection_bps, t.aggregate_bps, t.bytes_per_month);
    log << "traffic " << format_traffic(t) << "\n";
  }
  auto f = open_output(out / "summary.csv");
  CsvWriter csv(f);
  csv.cells("metric", "value");
  csv.cells("nodes", g.node_count());
  csv.cells("edges", g.edge_count());
  csv.cells("largest_component_fraction", largest_component_fraction(g));
  csv.cells("connections_per_node", average_connections_per_node(g));
  csv.cells("mean_degree", mean_degree(g));
  csv.cells("path_p95", paths.percentile(0.95));
  csv.cells("path_max", paths.max_distance());
  csv.cells("path_sampled", int(paths.sampled));
  csv.cells("powerlaw_exponent", tail ? format_real(tail->exponent_k) : std::string("nan"));
  csv.cells("multimodal_knee", mm ? std::to_string(mm->knee) : std::string("nan"));
  csv.cells("head_flatness", mm ? format_real(mm->head_flatness) : std::string("nan"));
  log << "analyzed " << g.node_count() << " nodes; 95th percentile path " << paths.percentile(0.95)
      << "\n";
}

void cmd_mismatch(const MismatchOptions& o, const Common& c, std::ostream& log) {
  const fs::path out(c.out);
  if (o.graph.empty() && o.stress_example.empty()) {
    throw InvalidArgument("mismatch: give --graph and/or --stress-example");
  }
  if (!o.graph.empty()) {
    const OverlayGraph g = load_graph(o.graph);
    const ClusterPartition p = build_clusters(g, o.hub_threshold, o.overlap);
    {
      auto f = open_output(out / "clusters.csv");
      write_clusters_csv(p, f);
    }
    auto f = open_output(out / "entropy.csv");
    CsvWriter csv(f);
    csv.cells("field", "whole_entropy", "clustered_entropy", "reduction", "clusters");
    for (LabelField field : {LabelField::Domain, LabelField::As}) {
      std::vector<std::string> labels;
      for (NodeId id : g.nodes()) labels.push_back(node_label(g, id, field));
      const double whole = label_entropy(labels);
      const double clustered = clustering_entropy(p, g, field);
      const double reduction = whole > 0.0 ? (whole - clustered) / whole : 0.0;
      const char* name = field == LabelField::Domain ? "domain" : "as";
      csv.cells(name, whole, clustered, reduction, p.clusters.size());
      log << name << " entropy reduction " << format_real(reduction) << "\n";
    }
    auto a = open_output(out / "as.csv");
    CsvWriter as(a);
    as.cells("metric", "value");
    as.cells("intra_as_fraction", g.edge_count() ? format_real(intra_as_fraction(g)) : std::string("nan"));
    as.cells("top10_as_share", top_as_share(g, 10));
  }
  if (!o.stress_example.empty()) {
    if (o.stress_example != "aligned" && o.stress_example != "crossed") {
      throw InvalidArgument("stress-example: expected 'aligned' or 'crossed'");
    }
    const StressExample ex = two_site_example(o.stress_example == "crossed");
    const StressReport r = link_stress(ex.overlay, ex.underlay, ex.placement, ex.source, 7);
    auto f = open_output(out / "stress.csv");
    write_stress_csv(r, ex.underlay, f);
    log << "busiest link " << ex.underlay.name(r.max_link.first) << "-"
        << ex.underlay.name(r.max_link.second) << " carried " << r.max_count << " copies\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gnutella overlay simulation and analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI or TOML file with option values");
  Common common;
  app.add_option("--seed", common.seed, "PRNG seed")->capture_default_str();
  app.add_option("--out", common.out, "Output directory")->envname("GNUTELLAB_OUT")->capture_default_str();

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic overlay graph");
  g->add_option("--model", gen.model, "ba or multimodal")->capture_default_str();
  g->add_option("--n", gen.n, "Node count")->required();
  g->add_option("--m", gen.m, "Edges per new node (ba)")->capture_default_str();
  g->add_option("--knee", gen.knee, "Knee degree (multimodal)")->capture_default_str();
  g->add_option("--tail-exponent", gen.tail_exponent)->capture_default_str();
  g->add_option("--avg-connections", gen.avg_connections, "Edges per node")->capture_default_str();
  g->add_option("--labels", gen.labels, "none, independent or correlated")->capture_default_str();
  g->add_option("--domains", gen.domains, "Domain count (independent)")->capture_default_str();
  g->add_option("--ases", gen.ases, "AS count (independent)")->capture_default_str();
  g->add_option("--top-as-mass", gen.top_as_mass, "Mass of the ten largest ASs")->capture_default_str();
  g->add_option("--locality", gen.locality, "Territory size fraction (correlated)")->capture_default_str();
  g->add_option("-o,--output", gen.output, "Graph file (default <out>/graph.graph)");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Run the network simulator");
  s->add_option("--preset", sim.preset, "nov2000, mid2001, churn or crawl");
  s->add_option("--population", sim.population);
  s->add_option("--duration", sim.duration, "Seconds");
  s->add_option("--ping-period", sim.ping_period, "Seconds");
  s->add_option("--query-rate", sim.query_rate, "Queries per node-hour");
  s->add_option("--ttl", sim.ttl);
  s->add_option("--known-hosts", sim.known_hosts);
  s->add_flag("--churn", sim.churn, "Enable calibrated churn");
  s->add_option("--churn-short", sim.churn_short, "hours cdf")->expected(2)->capture_default_str();
  s->add_option("--churn-long", sim.churn_long, "hours cdf")->expected(2)->capture_default_str();
  s->add_option("--hub-boost", sim.hub_boost, "Session scale factor for hubs");
  s->add_option("--snapshot-hours", sim.snapshot_hours);
  s->add_option("--connectivity-interval", sim.connectivity_interval, "Seconds");

  CrawlOptions cr;
  auto* c = app.add_subcommand("crawl", "Crawl a static graph file or a simulated network");
  c->add_option("--graph", cr.graph, "Graph file to crawl");
  c->add_option("--preset", cr.preset, "Simulator preset to crawl");
  c->add_option("--start-hours", cr.start_hours, "Simulated warm-up before crawling")->capture_default_str();
  c->add_option("--seed-count", cr.seed_count, "Initial nodes drawn from the simulation")->capture_default_str();
  c->add_option("--seeds", cr.seeds, "Initial node ids (default: every node of --graph)");
  c->add_option("--workers", cr.workers)->capture_default_str();
  c->add_option("--batch", cr.batch)->capture_default_str();
  c->add_option("--invasiveness-cap", cr.invasiveness_cap)->capture_default_str();
  c->add_option("--connect-timeout", cr.connect_timeout, "Seconds")->capture_default_str();
  c->add_option("--listen-timeout", cr.listen_timeout, "Seconds")->capture_default_str();

  AnalyzeOptions an;
  auto* a = app.add_subcommand("analyze", "Degree, path, fit, robustness and traffic analyses");
  a->add_option("--graph", an.graph);
  a->add_option("--traffic", an.traffic, "traffic.csv from simulate");
  a->add_option("--min-degree", an.min_degree, "Power-law fit lower bound")->capture_default_str();
  a->add_option("--per-connection-bps", an.per_connection_bps)->capture_default_str();
  a->add_option("--fractions", an.fractions, "Removal fractions")->capture_default_str();
  a->add_option("--path-sources", an.path_sources)->capture_default_str();

  MismatchOptions mm;
  auto* m = app.add_subcommand("mismatch", "Entropy clustering, AS locality and link stress");
  m->add_option("--graph", mm.graph);
  m->add_option("--hub-threshold", mm.hub_threshold)->capture_default_str();
  m->add_option("--overlap", mm.overlap)->capture_default_str();
  m->add_option("--stress-example", mm.stress_example, "aligned or crossed");

  ReportOptions rep;
  auto* r = app.add_subcommand("report", "Summarize pipeline outputs");
  r->add_option("--input", rep.inputs, "Directories holding analyze/mismatch outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    const fs::path out_dir(common.out);
    const std::string name = chosen->get_name();
    if (name == "generate") {
      cmd_generate(gen, common, out);
      const fs::path path = gen.output.empty() ? out_dir / "graph.graph" : fs::path(gen.output);
      write_sidecar(app, name, path.string() + ".config.ini");
    } else {
      if (name == "simulate") cmd_simulate(sim, *s, common, out);
      if (name == "crawl") cmd_crawl(cr, common, out);
      if (name == "analyze") cmd_analyze(an, common, out);
      if (name == "mismatch") cmd_mismatch(mm, common, out);
      if (name == "report") {
        std::vector<fs::path> inputs(rep.inputs.begin(), rep.inputs.end());
        write_report(inputs, out_dir, out);
      }
      write_sidecar(app, name, out_dir / (name + ".config.ini"));
    }
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kSuccess;
}

}  // namespace gnutellab::cli
