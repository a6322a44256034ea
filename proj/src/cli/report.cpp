#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>

#include "commands.hpp"
#include "gnutellab/cli.hpp"
#include "gnutellab/csv.hpp"
#include "gnutellab/error.hpp"

namespace gnutellab::cli {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// metric,value tables as a map.
std::map<std::string, std::string> read_metrics(const std::filesystem::path& path) {
  const CsvTable t = load_csv(path);
  const std::size_t k = t.column("metric");
  const std::size_t v = t.column("value");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[k]] = row[v];
  return out;
}

std::string need(const std::map<std::string, std::string>& m, const std::string& key,
                 const std::filesystem::path& path) {
  auto it = m.find(key);
  if (it == m.end()) throw ParseError(path.string(), 1, "missing metric '" + key + "'");
  return it->second;
}

}  // namespace

std::string format_traffic(const TrafficEstimate& e) {
  static const std::pair<double, const char*> units[] = {
      {1e9, "Gbps"}, {1e6, "Mbps"}, {1e3, "Kbps"}, {1.0, "bps"}};
  std::string rate;
  for (const auto& [scale, name] : units) {
    if (e.aggregate_bps >= scale || scale == 1.0) {
      rate = fixed(e.aggregate_bps / scale, 2) + " " + name;
      break;
    }
  }
  const double tb = e.terabytes_per_month();
  const std::string volume = tb >= 1.0 ? fixed(std::round(tb), 0) : fixed(tb, 6);
  return rate + " / " + volume + " TB/month";
}

void write_report(const std::vector<std::filesystem::path>& inputs,
                  const std::filesystem::path& out_dir, std::ostream& text) {
  const std::vector<std::string> required = {"summary.csv", "traffic_estimate.csv", "entropy.csv",
                                             "as.csv"};
  std::map<std::string, std::filesystem::path> found;
  std::vector<std::string> missing;
  for (const auto& name : required) {
    for (const auto& dir : inputs) {
      if (std::filesystem::is_regular_file(dir / name)) {
        found[name] = dir / name;
        break;
      }
    }
    if (!found.count(name)) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw IoError("missing input files: " + list);
  }

  const auto summary = read_metrics(found["summary.csv"]);
  const auto as = read_metrics(found["as.csv"]);

  const CsvTable traffic = load_csv(found["traffic_estimate.csv"]);
  if (traffic.rows.empty()) throw ParseError(traffic.source, 2, "no traffic estimate row");
  const auto& tr = traffic.rows.front();
  const TrafficEstimate estimate = traffic_estimate(
      parse_real(tr[traffic.column("connections")], traffic.source, 2),
      parse_real(tr[traffic.column("per_connection_bps")], traffic.source, 2));

  const CsvTable entropy = load_csv(found["entropy.csv"]);
  std::optional<std::string> reduction;
  for (const auto& row : entropy.rows) {
    if (row[entropy.column("field")] == "domain") reduction = row[entropy.column("reduction")];
  }
  if (!reduction) throw ParseError(entropy.source, 1, "no domain entropy row");

  const std::vector<std::pair<std::string, std::string>> rows = {
      {"largest_component_fraction", need(summary, "largest_component_fraction", found["summary.csv"])},
      {"connections_per_node", need(summary, "connections_per_node", found["summary.csv"])},
      {"path_p95", need(summary, "path_p95", found["summary.csv"])},
      {"powerlaw_exponent", need(summary, "powerlaw_exponent", found["summary.csv"])},
      {"traffic", format_traffic(estimate)},
      {"entropy_reduction", *reduction},
      {"intra_as_fraction", need(as, "intra_as_fraction", found["as.csv"])},
  };

  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) text << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";

  auto out = open_output(out_dir / "report.csv");
  CsvWriter csv(out);
  csv.cells("metric", "value");
  for (const auto& [k, v] : rows) csv.cells(k, v);
}

}  // namespace gnutellab::cli
