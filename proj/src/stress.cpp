#include <algorithm>
#include <deque>
#include <limits>

#include "gnutellab/csv.hpp"
#include "gnutellab/mismatch.hpp"
#include "gnutellab/protocol.hpp"

namespace gnutellab {

std::size_t UnderlayGraph::add_node(std::string name) {
  names_.push_back(std::move(name));
  adj_.emplace_back();
  return names_.size() - 1;
}

void UnderlayGraph::add_link(std::size_t a, std::size_t b) {
  if (a >= names_.size() || b >= names_.size()) throw GraphError("unknown underlay node");
  if (a == b) throw GraphError("underlay self-link at " + names_[a]);
  auto& la = adj_[a];
  auto pos = std::lower_bound(la.begin(), la.end(), b);
  if (pos != la.end() && *pos == b) return;
  la.insert(pos, b);
  auto& lb = adj_[b];
  lb.insert(std::lower_bound(lb.begin(), lb.end(), a), a);
}

void UnderlayGraph::add_link(const std::string& a, const std::string& b) { add_link(find(a), find(b)); }

std::size_t UnderlayGraph::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw GraphError("unknown underlay node '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t UnderlayGraph::link_count() const {
  std::size_t n = 0;
  for (const auto& l : adj_) n += l.size();
  return n / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> UnderlayGraph::links() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < adj_.size(); ++a) {
    for (std::size_t b : adj_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool UnderlayGraph::connected() const {
  if (names_.empty()) return true;
  std::vector<char> seen(names_.size(), 0);
  std::deque<std::size_t> q{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : adj_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push_back(v);
      }
    }
  }
  return count == names_.size();
}

std::vector<std::size_t> UnderlayGraph::route(std::size_t a, std::size_t b) const {
  if (a >= names_.size() || b >= names_.size()) throw GraphError("unknown underlay node");
  if (a > b) {
    auto r = route(b, a);
    std::reverse(r.begin(), r.end());
    return r;
  }
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(names_.size(), kInf);
  std::deque<std::size_t> q{b};
  dist[b] = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : adj_[u]) {
      if (dist[v] == kInf) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  if (dist[a] == kInf) throw GraphError("no route from " + names_[a] + " to " + names_[b]);
  // Walking downhill in distance and taking the smallest next hop each time
  // yields the lexicographically smallest shortest path.
  std::vector<std::size_t> path{a};
  for (std::size_t u = a; u != b;) {
    for (std::size_t v : adj_[u]) {
      if (dist[v] + 1 == dist[u]) {
        u = v;
        break;
      }
    }
    path.push_back(u);
  }
  return path;
}

void HostPlacement::validate(const OverlayGraph& overlay, const UnderlayGraph& underlay) const {
  std::vector<char> used(underlay.node_count(), 0);
  for (NodeId id : overlay.nodes()) {
    auto it = host.find(id);
    if (it == host.end()) throw InvalidArgument("overlay node " + std::to_string(id) + " is not placed");
    if (it->second >= underlay.node_count()) {
      throw InvalidArgument("overlay node " + std::to_string(id) + " placed on an unknown host");
    }
    if (used[it->second]++) {
      throw InvalidArgument("two overlay nodes placed on " + underlay.name(it->second));
    }
  }
}

std::uint64_t StressReport::count(std::size_t a, std::size_t b) const {
  auto it = counts.find({std::min(a, b), std::max(a, b)});
  return it == counts.end() ? 0 : it->second;
}

StressReport link_stress(const OverlayGraph& overlay, const UnderlayGraph& underlay,
                         const HostPlacement& placement, NodeId source, int initial_ttl) {
  placement.validate(overlay, underlay);
  if (!underlay.connected()) throw InvalidArgument("underlay is not connected");
  StressReport report;
  for (const auto& link : underlay.links()) report.counts[link] = 0;

  FloodOptions options;
  options.on_transmit = [&](NodeId from, NodeId to, const Message& msg) {
    if (!is_broadcast(msg.kind)) return;
    const auto path = underlay.route(placement.host.at(from), placement.host.at(to));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      ++report.counts[{std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])}];
      ++report.total;
    }
  };
  flood(overlay, source, MessageKind::Ping, initial_ttl, options);
  for (const auto& [link, c] : report.counts) {
    if (c > report.max_count) {
      report.max_count = c;
      report.max_link = link;
    }
  }
  return report;
}

void write_stress_csv(const StressReport& report, const UnderlayGraph& underlay, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("link", "count");
  for (const auto& [link, c] : report.counts) {
    csv.cells(underlay.name(link.first) + "-" + underlay.name(link.second), c);
  }
}

StressExample two_site_example(bool crossed) {
  StressExample ex;
  const std::string hosts = "ABCDEFGH";
  for (char h : hosts) {
    ex.underlay.add_node(std::string(1, h));
    const NodeId id = ex.overlay.add_node(NodeInfo{std::string(1, h), 6346, "", "", 0, 0});
    ex.placement.host[id] = static_cast<std::size_t>(id);
  }
  for (const char* link : {"AB", "AC", "AD", "DE", "EF", "EG", "EH"}) {
    ex.underlay.add_link(std::string(1, link[0]), std::string(1, link[1]));
  }
  auto idx = [&](char h) { return static_cast<NodeId>(hosts.find(h)); };
  if (crossed) {
    for (const char* e : {"AE", "EB", "BF", "FC", "CG", "GD", "GH"}) ex.overlay.add_edge(idx(e[0]), idx(e[1]));
  } else {
    for (const auto& [a, b] : ex.underlay.links()) {
      ex.overlay.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }
  ex.source = idx('A');
  return ex;
}

}  // namespace gnutellab
