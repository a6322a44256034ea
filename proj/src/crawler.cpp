#include "gnutellab/crawler.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <set>

#include "gnutellab/csv.hpp"

namespace gnutellab {
namespace {

constexpr NodeId kCrawlerId = kSelfLink - 1;

// Fills `out` with the id, info and neighbor list of a live node.
using ServentLookup = std::function<bool(NodeId, ServentState& out)>;

// Joins the target as a transient neighbor, floods a PING with ttl 2 and
// reads the target's neighbors off the PONGs that travelled two hops.
ContactResult probe(NodeId target, const ServentLookup& lookup, std::uint64_t salt) {
  ContactResult result;
  std::map<NodeId, ServentState> states;
  auto state_of = [&](NodeId id) -> ServentState* {
    auto it = states.find(id);
    if (it != states.end()) return &it->second;
    ServentState s;
    s.memory = RoutingMemory(16);
    if (!lookup(id, s)) return nullptr;
    return &states.emplace(id, std::move(s)).first->second;
  };

  ServentState& crawler = states[kCrawlerId];
  crawler.self = kCrawlerId;
  crawler.memory = RoutingMemory(16);
  crawler.neighbors = {target};
  ServentState* t = state_of(target);
  if (!t) return result;
  t->neighbors.insert(std::upper_bound(t->neighbors.begin(), t->neighbors.end(), kCrawlerId),
                      kCrawlerId);
  result.status = ContactStatus::Ok;
  result.info = t->info;

  GuidSource guids(salt);
  auto start = originate(crawler, guids, MessageKind::Ping, std::monostate{}, 2);
  struct Hop {
    NodeId from;
    NodeId to;
    Message msg;
  };
  std::deque<Hop> pending;
  for (auto& s : start.sends) pending.push_back(Hop{kCrawlerId, s.to, std::move(s.msg)});
  while (!pending.empty()) {
    Hop h = std::move(pending.front());
    pending.pop_front();
    ServentState* at = state_of(h.to);
    if (!at) continue;
    for (auto& action : handle(*at, h.msg, h.from)) {
      if (auto* send = std::get_if<Send>(&action)) {
        pending.push_back(Hop{h.to, send->to, std::move(send->msg)});
      } else if (auto* local = std::get_if<DeliverLocally>(&action)) {
        const auto* pong = std::get_if<PongPayload>(&local->msg.payload);
        if (pong && local->msg.hops == 2) result.neighbors.emplace_back(pong->responder, pong->info);
      }
    }
  }
  std::sort(result.neighbors.begin(), result.neighbors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

}  // namespace

StaticNetwork::StaticNetwork(OverlayGraph graph, std::map<NodeId, std::size_t> max_connections)
    : graph_(std::move(graph)), limits_(std::move(max_connections)) {}

void StaticNetwork::advance_to(double t) { now_ = std::max(now_, t); }

ContactResult StaticNetwork::contact(NodeId id) {
  if (!graph_.contains(id)) return {};
  if (auto it = limits_.find(id); it != limits_.end() && graph_.degree(id) >= it->second) {
    return ContactResult{ContactStatus::Refused, {}, {}};
  }
  return probe(
      id,
      [this](NodeId n, ServentState& s) {
        if (!graph_.contains(n)) return false;
        s.self = n;
        s.info = graph_.info(n);
        auto adj = graph_.neighbors(n);
        s.neighbors.assign(adj.begin(), adj.end());
        return true;
      },
      id);
}

ContactResult SimulatedNetwork::contact(NodeId id) {
  const ServentState* target = sim_.servent(id);
  if (!target) return {};
  if (target->at_capacity()) return ContactResult{ContactStatus::Refused, {}, {}};
  return probe(
      id,
      [this](NodeId n, ServentState& s) {
        const ServentState* live = sim_.servent(n);
        if (!live) return false;
        s.self = n;
        s.info = live->info;
        s.neighbors = live->neighbors;
        return true;
      },
      (static_cast<std::uint64_t>(id) << 20) ^ static_cast<std::uint64_t>(sim_.now() * 1000.0));
}

void validate(const CrawlConfig& c) {
  if (c.initial_nodes.empty()) throw InvalidArgument("initial_nodes: empty seed list");
  if (c.workers < 1) throw InvalidArgument("workers: must be at least 1");
  if (c.workers > c.invasiveness_cap) throw InvalidArgument("workers: exceeds invasiveness_cap");
  if (c.batch_size < 1) throw InvalidArgument("batch_size: must be at least 1");
  if (!(c.connect_timeout > 0.0)) throw InvalidArgument("connect_timeout: must be positive");
  if (!(c.listen_timeout > 0.0)) throw InvalidArgument("listen_timeout: must be positive");
  if (!(c.connect_latency >= 0.0)) throw InvalidArgument("connect_latency: must be >= 0");
}

CrawlSnapshot crawl(CrawlNetwork& network, const CrawlConfig& config) {
  validate(config);
  CrawlSnapshot snap;
  snap.started_at = network.now();

  std::deque<NodeId> frontier;
  std::set<NodeId> assigned;
  std::map<NodeId, NodeInfo> reported;
  std::map<NodeId, NodeInfo> confirmed;
  std::set<std::pair<NodeId, NodeId>> edges;
  for (NodeId seed : config.initial_nodes) {
    if (assigned.insert(seed).second) frontier.push_back(seed);
  }

  struct Worker {
    std::vector<NodeId> batch;
    std::size_t next = 0;
    std::vector<std::pair<NodeId, ContactResult>> results;
  };
  enum class Step { Contact, Report };
  struct Event {
    double time;
    std::uint64_t seq;
    Step step;
    std::size_t worker;
  };
  auto later = [](const Event& a, const Event& b) {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  };
  std::priority_queue<Event, std::vector<Event>, decltype(later)> events(later);
  std::uint64_t seq = 0;
  std::vector<Worker> workers(config.workers);
  std::vector<std::size_t> idle;
  for (std::size_t w = config.workers; w-- > 0;) idle.push_back(w);

  double now = snap.started_at;
  auto dispatch = [&] {
    while (!idle.empty() && !frontier.empty()) {
      const std::size_t w = idle.back();
      idle.pop_back();
      Worker& worker = workers[w];
      worker.batch.clear();
      worker.results.clear();
      worker.next = 0;
      while (worker.batch.size() < config.batch_size && !frontier.empty()) {
        worker.batch.push_back(frontier.front());
        frontier.pop_front();
      }
      events.push(Event{now, seq++, Step::Contact, w});
    }
  };

  std::set<NodeId> contacted;
  dispatch();
  while (!events.empty()) {
    const Event e = events.top();
    events.pop();
    now = e.time;
    Worker& worker = workers[e.worker];
    if (e.step == Step::Contact) {
      const NodeId target = worker.batch[worker.next++];
      if (!contacted.insert(target).second) {
        throw InvariantViolation("node " + std::to_string(target) + " contacted twice");
      }
      network.advance_to(now);
      ContactResult r = network.contact(target);
      ++snap.contacts;
      const double spent = r.status == ContactStatus::Ok
                               ? config.connect_latency + config.listen_timeout
                               : config.connect_timeout;
      worker.results.emplace_back(target, std::move(r));
      const Step next = worker.next < worker.batch.size() ? Step::Contact : Step::Report;
      events.push(Event{now + spent, seq++, next, e.worker});
      continue;
    }
    for (auto& [node, r] : worker.results) {
      if (r.status != ContactStatus::Ok) continue;
      confirmed[node] = r.info;
      for (auto& [peer, info] : r.neighbors) {
        edges.insert({std::min(node, peer), std::max(node, peer)});
        reported.emplace(peer, info);
        if (assigned.insert(peer).second) frontier.push_back(peer);
      }
    }
    worker.results.clear();
    idle.push_back(e.worker);
    snap.finished_at = now;
    dispatch();
  }
  if (snap.finished_at < snap.started_at) snap.finished_at = snap.started_at;

  for (const auto& [id, info] : confirmed) snap.graph.insert_node(id, info);
  for (const auto& [a, b] : edges) {
    if (confirmed.count(a) && confirmed.count(b)) snap.graph.add_edge(a, b);
  }
  for (const auto& [id, info] : reported) {
    if (!confirmed.count(id)) snap.reported_only.push_back(info);
  }
  if (confirmed.empty()) snap.diagnostics.push_back("no initial node could be contacted");
  return snap;
}

void write_crawl_meta_csv(const CrawlSnapshot& s, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("started_at", "finished_at", "confirmed", "reported_only");
  csv.cells(s.started_at, s.finished_at, s.graph.node_count(), s.reported_only.size());
}

}  // namespace gnutellab
