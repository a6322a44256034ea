#include <algorithm>
#include <cmath>
#include <fstream>

#include "gnutellab/csv.hpp"
#include "gnutellab/graph_io.hpp"
#include "gnutellab/simulator.hpp"

namespace gnutellab {

SimConfig sim_preset(std::string_view name) {
  SimConfig c;
  if (name == "nov2000") {
    // Frequent pings, few queries: membership traffic dominates.
    c.target_population = 300;
    c.ping_period = 30.0;
    c.query_rate = 10.0;
    c.duration = 300.0;
  } else if (name == "mid2001") {
    // Sparse pings, heavy querying.
    c.target_population = 300;
    c.ping_period = 300.0;
    c.query_rate = 300.0;
    c.files_per_node = 1;
    c.duration = 600.0;
  } else if (name == "churn") {
    c.target_population = 1000;
    c.churn = calibrate_churn({4.0, 0.40}, {24.0, 0.75});
    c.initial_ttl = 2;
    c.ping_period = 3600.0;
    c.dial_fraction = 0.5;
    c.duration = 48.0 * 3600.0;
  } else if (name == "crawl") {
    // Nodes dial few peers but accept many, so most have room for a crawler.
    c.target_population = 5000;
    c.churn = calibrate_churn({4.0, 0.40}, {24.0, 0.75});
    c.max_connections_dist = {{8, 0.5}, {12, 0.3}, {24, 0.15}, {48, 0.05}};
    c.dial_fraction = 0.25;
    c.initial_ttl = 2;
    c.ping_period = 3600.0;
    c.duration = 72.0 * 3600.0;
  } else {
    throw InvalidArgument("unknown scenario preset '" + std::string(name) + "'");
  }
  return c;
}

std::vector<std::string> sim_preset_names() { return {"nov2000", "mid2001", "churn", "crawl"}; }

TrafficReport traffic_report(const SimReport& report) {
  TrafficReport t;
  t.total_messages = report.total_messages();
  t.total_bytes = report.total_bytes();
  if (t.total_messages == 0) throw InvalidArgument("traffic report needs at least one message");
  for (std::size_t k = 0; k < report.traffic.size(); ++k) {
    t.message_fraction[k] =
        static_cast<double>(report.traffic[k].count) / static_cast<double>(t.total_messages);
    t.byte_fraction[k] = t.total_bytes ? static_cast<double>(report.traffic[k].bytes) /
                                             static_cast<double>(t.total_bytes)
                                       : 0.0;
  }
  t.connection_seconds = report.connection_seconds;
  if (report.connection_seconds > 0.0) {
    t.per_connection_bytes_per_second =
        static_cast<double>(t.total_bytes) / report.connection_seconds;
  }
  return t;
}

SessionStats session_statistics(const SimReport& report, double short_hours, double long_hours) {
  if (!(short_hours > 0.0 && short_hours < long_hours)) {
    throw InvalidArgument("session statistics need 0 < short_hours < long_hours");
  }
  // (hours, ended) for sessions whose start was observed.
  std::vector<std::pair<double, bool>> obs;
  for (const auto& r : report.sessions) {
    if (r.known_host || r.left_censored) continue;
    obs.emplace_back((r.end - r.start) / 3600.0, !r.censored);
  }
  if (obs.empty()) throw InvalidArgument("no sessions with an observed start");
  // Departures sort before censorings at equal times.
  std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  SessionStats s;
  s.sessions = obs.size();
  double survival = 1.0;
  std::size_t at_risk = obs.size();
  double s_short = 1.0;
  double s_long = 1.0;
  for (std::size_t i = 0; i < obs.size();) {
    const double t = obs[i].first;
    std::size_t ended = 0, leaving = 0;
    for (; i < obs.size() && obs[i].first == t; ++i, ++leaving) ended += obs[i].second;
    if (ended) survival *= 1.0 - static_cast<double>(ended) / static_cast<double>(at_risk);
    at_risk -= leaving;
    if (t < short_hours) s_short = survival;
    if (t <= long_hours) s_long = survival;
  }
  if (obs.back().first < long_hours) s.observable = false;
  s.fraction_shorter = 1.0 - s_short;
  s.fraction_longer = s_long;
  return s;
}

void write_traffic_csv(const SimReport& report, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("kind", "count", "bytes");
  for (MessageKind k : kAllKinds) {
    const auto& t = report.tally(k);
    csv.cells(to_string(k), t.count, t.bytes);
  }
}

void write_links_csv(const SimReport& report, std::ostream& out) {
  std::vector<LinkKey> keys;
  keys.reserve(report.links.size());
  for (const auto& [key, counts] : report.links) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  CsvWriter csv(out);
  csv.cells("edge", "kind", "count");
  for (LinkKey key : keys) {
    const auto& counts = report.links.at(key);
    const std::string edge = std::to_string(key >> 32) + "-" + std::to_string(key & 0xFFFFFFFFULL);
    for (MessageKind k : kAllKinds) {
      const auto c = counts[static_cast<std::size_t>(k)];
      if (c) csv.cells(edge, to_string(k), c);
    }
  }
}

void write_sessions_csv(const SimReport& report, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("node", "start_s", "end_s", "censored", "left_censored", "known_host",
            "max_connections");
  for (const auto& s : report.sessions) {
    csv.cells(s.node, s.start, s.end, int(s.censored), int(s.left_censored), int(s.known_host),
              s.max_connections);
  }
}

void write_connectivity_csv(const SimReport& report, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("time_s", "nodes", "edges", "connections_per_node", "largest_component_fraction");
  for (const auto& s : report.connectivity) {
    csv.cells(s.time, s.nodes, s.edges, s.connections_per_node, s.largest_component_fraction);
  }
}

void export_report(const SimReport& report, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir / "traffic.csv");
    write_traffic_csv(report, out);
  }
  {
    auto out = open_output(dir / "links.csv");
    write_links_csv(report, out);
  }
  {
    auto out = open_output(dir / "sessions.csv");
    write_sessions_csv(report, out);
  }
  {
    auto out = open_output(dir / "connectivity.csv");
    write_connectivity_csv(report, out);
  }
  for (const auto& snap : report.snapshots) {
    const auto seconds = static_cast<long long>(std::llround(snap.time));
    save_graph(snap.graph, dir / ("snapshot_" + std::to_string(seconds) + ".graph"));
  }
}

}  // namespace gnutellab
