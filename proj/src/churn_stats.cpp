#include <cmath>
#include <set>
#include <string>

#include "gnutellab/crawler.hpp"
#include "gnutellab/csv.hpp"
#include "gnutellab/metrics.hpp"

namespace gnutellab {
namespace {

std::string identity(const NodeInfo& info) { return info.address + ":" + std::to_string(info.port); }

std::set<std::string> identities(const OverlayGraph& g) {
  std::set<std::string> out;
  for (NodeId id : g.nodes()) out.insert(identity(g.info(id)));
  return out;
}

std::size_t overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  for (const auto& key : a) n += b.count(key);
  return n;
}

}  // namespace

TimedGraph timed(const CrawlSnapshot& s) { return TimedGraph{s.started_at, s.finished_at, s.graph}; }

ChurnReport churn_statistics(const std::vector<TimedGraph>& snaps,
                             const std::vector<double>& horizons_hours, std::size_t hub_threshold) {
  if (snaps.size() < 2) throw InvalidArgument("churn statistics need at least two snapshots");
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (snaps[i].finished_at < snaps[i].started_at) {
      throw InvalidArgument("snapshot " + std::to_string(i) + " finishes before it starts");
    }
    if (i && snaps[i].started_at < snaps[i - 1].finished_at) {
      throw InvalidArgument("snapshot windows " + std::to_string(i - 1) + " and " +
                            std::to_string(i) + " overlap");
    }
  }
  std::vector<std::set<std::string>> ids;
  for (const auto& s : snaps) ids.push_back(identities(s.graph));

  ChurnReport r;
  r.horizons_hours = horizons_hours;
  const double t0 = snaps.front().midpoint();
  for (double h : horizons_hours) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      if (snaps[i].midpoint() - t0 <= h * 3600.0) j = i;
    }
    const double base = static_cast<double>(ids[0].size());
    const double s = base > 0 ? static_cast<double>(overlap(ids[0], ids[j])) / base : 0.0;
    r.survival.push_back(s);
    r.departed.push_back(1.0 - s);
  }

  std::size_t seen = 0, again = 0, hubs = 0, hubs_again = 0;
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    const OverlayGraph& g = snaps[i].graph;
    for (NodeId id : g.nodes()) {
      const bool back = ids[i + 1].count(identity(g.info(id))) != 0;
      ++seen;
      again += back;
      if (g.degree(id) >= hub_threshold) {
        ++hubs;
        hubs_again += back;
      }
    }
  }
  r.hub_samples = hubs;
  if (seen) r.overall_reobservation = static_cast<double>(again) / static_cast<double>(seen);
  if (hubs) r.hub_reobservation = static_cast<double>(hubs_again) / static_cast<double>(hubs);
  if (hubs && r.overall_reobservation > 0.0) r.hub_ratio = r.hub_reobservation / r.overall_reobservation;
  return r;
}

void write_churn_csv(const ChurnReport& r, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("horizon_hours", "survival_fraction");
  for (std::size_t i = 0; i < r.horizons_hours.size(); ++i) {
    csv.cells(r.horizons_hours[i], r.survival[i]);
  }
}

double degree_total_variation(const OverlayGraph& a, const OverlayGraph& b) {
  const auto da = degree_distribution(a);
  const auto db = degree_distribution(b);
  const double na = static_cast<double>(da.total());
  const double nb = static_cast<double>(db.total());
  if (na == 0.0 || nb == 0.0) return na == nb ? 0.0 : 1.0;
  std::set<std::size_t> degrees;
  for (const auto& [d, c] : da.counts) degrees.insert(d);
  for (const auto& [d, c] : db.counts) degrees.insert(d);
  double sum = 0.0;
  for (std::size_t d : degrees) {
    sum += std::abs(static_cast<double>(da.count(d)) / na - static_cast<double>(db.count(d)) / nb);
  }
  return 0.5 * sum;
}

FidelityReport snapshot_fidelity(const OverlayGraph& truth, const OverlayGraph& snapshot) {
  FidelityReport f;
  const auto truth_ids = identities(truth);
  const auto snap_ids = identities(snapshot);
  f.node_recall = truth_ids.empty() ? 1.0
                                    : static_cast<double>(overlap(truth_ids, snap_ids)) /
                                          static_cast<double>(truth_ids.size());
  auto edge_keys = [](const OverlayGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : g.edges()) {
      auto ka = identity(g.info(a));
      auto kb = identity(g.info(b));
      if (kb < ka) std::swap(ka, kb);
      out.emplace(std::move(ka), std::move(kb));
    }
    return out;
  };
  const auto te = edge_keys(truth);
  const auto se = edge_keys(snapshot);
  std::size_t hit = 0;
  for (const auto& e : te) hit += se.count(e);
  f.edge_recall = te.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(te.size());
  f.degree_distance = degree_total_variation(truth, snapshot);
  return f;
}

}  // namespace gnutellab
