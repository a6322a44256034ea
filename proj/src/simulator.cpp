#include "gnutellab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnutellab/metrics.hpp"

namespace gnutellab {
namespace {

constexpr double kForever = std::numeric_limits<double>::infinity();

const std::vector<std::string>& builtin_catalog() {
  static const std::vector<std::string> terms = {
      "beat",   "love",    "night",  "dance", "blue",   "dream",  "rock",   "live",
      "remix",  "summer",  "heart",  "fire",  "angel",  "rain",   "star",   "happy",
      "money",  "girl",    "world",  "time",  "baby",   "moon",   "river",  "soul",
      "jazz",   "guitar",  "piano",  "metal", "funk",   "house",  "trance", "blues",
      "movie",  "trailer", "video",  "game",  "manual", "ebook",  "lecture", "demo"};
  return terms;
}

}  // namespace

void validate(const SimConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw InvalidArgument(key + ": " + why);
  };
  if (c.known_hosts < 1) fail("known_hosts", "need at least one known host");
  if (c.known_hosts > c.target_population) fail("known_hosts", "exceeds target_population");
  if (!(c.duration > 0.0)) fail("duration", "must be positive");
  if (!(c.ping_period > 0.0)) fail("ping_period", "must be positive");
  if (c.initial_ttl < 1) fail("initial_ttl", "must be at least 1");
  if (c.max_connections_dist.empty()) fail("max_connections_dist", "empty distribution");
  for (const auto& [limit, weight] : c.max_connections_dist) {
    if (limit < 1) fail("max_connections_dist", "limits must be at least 1");
    if (!(weight > 0.0)) fail("max_connections_dist", "weights must be positive");
  }
  if (!(c.dial_fraction > 0.0 && c.dial_fraction <= 1.0)) fail("dial_fraction", "must be in (0, 1]");
  if (c.known_host_max_connections < 1) fail("known_host_max_connections", "must be at least 1");
  if (c.churn.enabled) {
    if (!(c.churn.shape > 0.0)) fail("churn.shape", "must be positive");
    if (!(c.churn.scale_hours > 0.0)) fail("churn.scale_hours", "must be positive");
    if (!(c.churn.arrival_rate_per_hour >= 0.0)) fail("churn.arrival_rate_per_hour", "must be >= 0");
    if (!(c.churn.hub_availability_boost > 0.0)) fail("churn.hub_availability_boost", "must be positive");
  }
  if (!(c.query_rate >= 0.0)) fail("query_rate", "must be >= 0");
  if (!(c.hop_delay > 0.0)) fail("hop_delay", "must be positive");
  if (c.routing_memory < 1) fail("routing_memory", "must be at least 1");
  if (c.host_cache_size < 1) fail("host_cache_size", "must be at least 1");
  for (double t : c.snapshot_times) {
    if (!(t >= 0.0 && t < c.duration)) fail("snapshot_times", "must lie in [0, duration)");
  }
  if (!(c.connectivity_interval >= 0.0)) fail("connectivity_interval", "must be >= 0");
}

std::uint64_t SimReport::total_messages() const {
  std::uint64_t n = 0;
  for (const auto& t : traffic) n += t.count;
  return n;
}

std::uint64_t SimReport::total_bytes() const {
  std::uint64_t n = 0;
  for (const auto& t : traffic) n += t.bytes;
  return n;
}

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)), rng_(config_.seed), guids_(config_.seed ^ 0xA5A5A5A5DEADBEEFULL) {
  validate(config_);
  std::vector<double> weights;
  for (const auto& [limit, w] : config_.max_connections_dist) weights.push_back(w);
  limit_dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  catalog_ = config_.query_catalog.empty() ? builtin_catalog() : config_.query_catalog;

  report_.duration = config_.duration;
  report_.bytes_per_message = config_.bytes_per_message;

  for (std::size_t i = 0; i < config_.known_hosts; ++i) {
    const NodeId id = create_node(true, config_.known_host_max_connections);
    known_hosts_.push_back(id);
    nodes_[id].session_end = kForever;
    schedule(0.0, EventType::Join, id);
  }

  // Peers online at the start are drawn from the stationary mix: limit
  // classes weighted by their mean session length, residual session times.
  std::discrete_distribution<std::size_t> initial_limit = limit_dist_;
  if (config_.churn.enabled) {
    std::vector<double> w;
    for (const auto& [limit, weight] : config_.max_connections_dist) {
      const bool hub = limit >= config_.churn.hub_degree_threshold;
      w.push_back(weight * (hub ? config_.churn.hub_availability_boost : 1.0));
    }
    initial_limit = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  const double window = std::min(config_.ping_period, 60.0);
  std::uniform_real_distribution<double> join_time(0.0, window);
  for (std::size_t i = config_.known_hosts; i < config_.target_population; ++i) {
    const std::size_t limit = config_.max_connections_dist[initial_limit(rng_)].first;
    const NodeId id = create_node(false, limit);
    const double t = join_time(rng_);
    nodes_[id].session_end =
        config_.churn.enabled ? t + 3600.0 * draw_session_hours(limit, true) : kForever;
    schedule(t, EventType::Join, id);
  }

  if (config_.churn.enabled && arrival_rate_per_second() > 0.0) {
    std::exponential_distribution<double> gap(arrival_rate_per_second());
    schedule(gap(rng_), EventType::Arrival, 0);
  }
  for (double t : config_.snapshot_times) schedule(t, EventType::Snapshot, 0);
  if (config_.connectivity_interval > 0.0 && config_.connectivity_interval < config_.duration) {
    schedule(config_.connectivity_interval, EventType::Sample, 0);
  }
}

double Simulation::arrival_rate_per_second() const {
  const ChurnModel& churn = config_.churn;
  if (churn.arrival_rate_per_hour > 0.0) return churn.arrival_rate_per_hour / 3600.0;
  double total_weight = 0.0;
  double mean_hours = 0.0;
  for (const auto& [limit, weight] : config_.max_connections_dist) {
    const bool hub = limit >= churn.hub_degree_threshold;
    total_weight += weight;
    mean_hours += weight * churn.mean_hours() * (hub ? churn.hub_availability_boost : 1.0);
  }
  mean_hours /= total_weight;
  const double peers = static_cast<double>(config_.target_population - config_.known_hosts);
  return peers / mean_hours / 3600.0;
}

std::size_t Simulation::draw_limit() { return config_.max_connections_dist[limit_dist_(rng_)].first; }

double Simulation::draw_session_hours(std::size_t limit, bool residual) {
  const ChurnModel& churn = config_.churn;
  const double k = churn.shape;
  double scale = churn.scale_hours;
  if (limit >= churn.hub_degree_threshold) scale *= churn.hub_availability_boost;
  if (!residual) return std::weibull_distribution<double>(k, scale)(rng_);
  // Length-biased Weibull: (L / scale)^k ~ Gamma(1 + 1/k); then a uniform
  // position inside the session gives the remaining time.
  const double g = std::gamma_distribution<double>(1.0 + 1.0 / k, 1.0)(rng_);
  const double length = scale * std::pow(g, 1.0 / k);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) * length;
}

NodeId Simulation::create_node(bool known_host, std::size_t limit) {
  const auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.known_host = known_host;
  node.state.self = id;
  node.state.max_connections = limit;
  node.state.memory = RoutingMemory(config_.routing_memory);
  node.dial_target = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config_.dial_fraction * static_cast<double>(limit))));
  node.state.info.address = synthetic_address(id);
  std::uniform_int_distribution<std::size_t> term(0, catalog_.size() - 1);
  std::uniform_int_distribution<int> suffix(0, 999);
  std::uniform_int_distribution<std::uint64_t> kbytes(1000, 8000);
  for (std::size_t i = 0; i < config_.files_per_node; ++i) {
    node.state.local_files.push_back(catalog_[term(rng_)] + "-" + std::to_string(suffix(rng_)) +
                                     ".mp3");
    node.state.info.kbytes_shared += kbytes(rng_);
  }
  node.state.info.files_shared = node.state.local_files.size();
  nodes_.push_back(std::move(node));
  return id;
}

void Simulation::schedule(double time, EventType type, NodeId node, NodeId from,
                          std::uint32_t slot) {
  queue_.push(Event{time, seq_++, type, node, from, slot});
}

const ServentState* Simulation::servent(NodeId id) const {
  return alive(id) ? &nodes_[id].state : nullptr;
}

std::vector<NodeId> Simulation::alive_nodes() const {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].alive) out.push_back(id);
  }
  return out;
}

OverlayGraph Simulation::live_graph() const {
  OverlayGraph g;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].alive) g.insert_node(id, nodes_[id].state.info);
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (!nodes_[id].alive) continue;
    for (NodeId n : nodes_[id].state.neighbors) {
      if (id < n) g.add_edge(id, n);
    }
  }
  return g;
}

void Simulation::accumulate_to(double t) {
  const double until = std::min(t, config_.duration);
  if (until > accounted_to_) {
    report_.connection_seconds += static_cast<double>(live_edges_) * (until - accounted_to_);
    accounted_to_ = until;
  }
}

void Simulation::learn(NodeId id, NodeId peer) {
  if (peer == id) return;
  auto& cache = nodes_[id].cache;
  auto it = std::find(cache.begin(), cache.end(), peer);
  if (it != cache.end()) cache.erase(it);
  cache.push_front(peer);
  if (cache.size() > config_.host_cache_size) cache.pop_back();
}

bool Simulation::try_connect(NodeId a, NodeId b) {
  if (a == b || !alive(a) || !alive(b)) return false;
  ServentState& sa = nodes_[a].state;
  ServentState& sb = nodes_[b].state;
  if (sa.is_neighbor(b) || sa.at_capacity() || sb.at_capacity()) return false;
  sa.connect(b);
  sb.connect(a);
  ++live_edges_;
  return true;
}

void Simulation::dial_from_cache(NodeId id) {
  Node& node = nodes_[id];
  std::vector<NodeId> candidates(node.cache.begin(), node.cache.end());
  for (NodeId c : candidates) {
    if (node.state.neighbors.size() >= node.dial_target) break;
    if (!alive(c)) {
      auto it = std::find(node.cache.begin(), node.cache.end(), c);
      if (it != node.cache.end()) node.cache.erase(it);
      continue;
    }
    try_connect(id, c);
  }
}

void Simulation::bootstrap(NodeId id) {
  std::vector<NodeId> hosts;
  for (NodeId h : known_hosts_) {
    if (h != id && alive(h)) hosts.push_back(h);
  }
  std::vector<NodeId> candidates;
  if (!hosts.empty()) {
    const NodeId h = hosts[std::uniform_int_distribution<std::size_t>(0, hosts.size() - 1)(rng_)];
    candidates.push_back(h);
    for (NodeId r : recent_joiners_) candidates.push_back(r);
    for (NodeId c : nodes_[h].cache) candidates.push_back(c);
    for (NodeId n : nodes_[h].state.neighbors) candidates.push_back(n);
  } else {
    for (NodeId r : recent_joiners_) candidates.push_back(r);
  }
  // The host's pick comes first; the rest are tried in random order so that
  // joiners do not all pile onto the same few peers.
  if (candidates.size() > 2) std::shuffle(candidates.begin() + 1, candidates.end(), rng_);
  Node& node = nodes_[id];
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (alive(*it)) learn(id, *it);
  }
  for (NodeId c : candidates) {
    if (node.state.neighbors.size() >= node.dial_target) break;
    try_connect(id, c);
  }
}

void Simulation::join(NodeId id, bool left_censored) {
  Node& node = nodes_[id];
  node.alive = true;
  node.session = report_.sessions.size();
  report_.sessions.push_back(SessionRecord{id, now_, now_, false, left_censored, node.known_host,
                                           node.state.max_connections});
  bootstrap(id);
  if (!node.known_host) {
    recent_joiners_.push_front(id);
    if (recent_joiners_.size() > config_.recent_joiners) recent_joiners_.pop_back();
  }
  schedule(now_, EventType::Ping, id);
  if (config_.query_rate > 0.0) {
    std::exponential_distribution<double> gap(config_.query_rate / 3600.0);
    schedule(now_ + gap(rng_), EventType::Query, id);
  }
  if (node.session_end < kForever) schedule(node.session_end, EventType::Depart, id);
}

void Simulation::depart(NodeId id) {
  Node& node = nodes_[id];
  if (!node.alive || node.known_host) return;
  node.alive = false;
  report_.sessions[node.session].end = now_;
  const std::vector<NodeId> former = node.state.neighbors;
  for (NodeId v : former) {
    nodes_[v].state.disconnect(id);
    --live_edges_;
  }
  node.state.neighbors.clear();
  node.state.memory = RoutingMemory(1);
  node.cache.clear();
  for (NodeId v : former) {
    if (nodes_[v].state.neighbors.size() < nodes_[v].dial_target) dial_from_cache(v);
    if (nodes_[v].state.neighbors.empty()) bootstrap(v);
  }
}

void Simulation::originate_from(NodeId id, MessageKind kind, Payload payload) {
  auto o = originate(nodes_[id].state, guids_, kind, std::move(payload), config_.initial_ttl);
  for (auto& s : o.sends) transmit(id, std::move(s));
}

void Simulation::transmit(NodeId from, Send&& send) {
  const auto k = static_cast<std::size_t>(send.msg.kind);
  ++report_.traffic[k].count;
  report_.traffic[k].bytes += config_.bytes_per_message[k];
  ++report_.links[link_key(from, send.to)][k];
  std::uint32_t slot;
  if (free_slots_.empty()) {
    slot = static_cast<std::uint32_t>(pool_.size());
    pool_.push_back(std::move(send.msg));
  } else {
    slot = free_slots_.back();
    free_slots_.pop_back();
    pool_[slot] = std::move(send.msg);
  }
  schedule(now_ + config_.hop_delay, EventType::Deliver, send.to, from, slot);
}

void Simulation::deliver(const Event& e) {
  Message msg = std::move(pool_[e.slot]);
  free_slots_.push_back(e.slot);
  const NodeId to = e.node;
  if (!alive(to) || !nodes_[to].state.is_neighbor(e.from)) {
    ++report_.dropped_departed;
    return;
  }
  bool expired = false;
  for (auto& action : handle(nodes_[to].state, msg, e.from)) {
    if (auto* send = std::get_if<Send>(&action)) {
      transmit(to, std::move(*send));
    } else if (auto* local = std::get_if<DeliverLocally>(&action)) {
      if (const auto* pong = std::get_if<PongPayload>(&local->msg.payload)) {
        ++report_.pongs_delivered;
        learn(to, pong->responder);
        if (nodes_[to].state.neighbors.size() < nodes_[to].dial_target) {
          try_connect(to, pong->responder);
        }
      } else if (local->msg.kind == MessageKind::QueryResponse) {
        ++report_.query_hits_delivered;
      }
    } else {
      const DropReason reason = std::get<Drop>(action).reason;
      if (reason == DropReason::Expired) expired = true;
      if (reason == DropReason::Duplicate) ++report_.duplicates;
    }
  }
  if (expired) {
    ++report_.expired;
  } else {
    ++report_.delivered;
  }
}

void Simulation::record_sample() {
  const OverlayGraph g = live_graph();
  ConnectivitySample s;
  s.time = now_;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  s.connections_per_node = s.nodes ? average_connections_per_node(g) : 0.0;
  s.largest_component_fraction = largest_component_fraction(g);
  report_.connectivity.push_back(s);
}

void Simulation::process(const Event& e) {
  switch (e.type) {
    case EventType::Deliver:
      deliver(e);
      break;
    case EventType::Join:
      join(e.node, config_.churn.enabled && !nodes_[e.node].known_host);
      break;
    case EventType::Arrival: {
      const std::size_t limit = draw_limit();
      const NodeId id = create_node(false, limit);
      nodes_[id].session_end = now_ + 3600.0 * draw_session_hours(limit, false);
      join(id, false);
      std::exponential_distribution<double> gap(arrival_rate_per_second());
      const double next = now_ + gap(rng_);
      if (next < config_.duration) schedule(next, EventType::Arrival, 0);
      break;
    }
    case EventType::Depart:
      depart(e.node);
      break;
    case EventType::Ping: {
      if (!alive(e.node)) break;
      Node& node = nodes_[e.node];
      if (node.state.neighbors.size() < node.dial_target) dial_from_cache(e.node);
      if (node.state.neighbors.empty()) bootstrap(e.node);
      ++report_.pings_originated[e.node];
      originate_from(e.node, MessageKind::Ping, std::monostate{});
      const double next = now_ + config_.ping_period;
      if (next < config_.duration) schedule(next, EventType::Ping, e.node);
      break;
    }
    case EventType::Query: {
      if (!alive(e.node)) break;
      const auto& term =
          catalog_[std::uniform_int_distribution<std::size_t>(0, catalog_.size() - 1)(rng_)];
      ++report_.queries_originated;
      originate_from(e.node, MessageKind::Query, QueryPayload{term});
      std::exponential_distribution<double> gap(config_.query_rate / 3600.0);
      const double next = now_ + gap(rng_);
      if (next < config_.duration) schedule(next, EventType::Query, e.node);
      break;
    }
    case EventType::Snapshot:
      report_.snapshots.push_back(Snapshot{now_, live_graph()});
      break;
    case EventType::Sample: {
      record_sample();
      const double next = now_ + config_.connectivity_interval;
      if (next < config_.duration) schedule(next, EventType::Sample, 0);
      break;
    }
  }
}

void Simulation::advance_to(double t) {
  while (!queue_.empty() && queue_.top().time <= t) {
    const Event e = queue_.top();
    queue_.pop();
    if (e.time >= config_.duration && e.type != EventType::Deliver) continue;
    accumulate_to(e.time);
    now_ = e.time;
    process(e);
  }
  accumulate_to(t);
  now_ = std::max(now_, t);
}

const SimReport& Simulation::finish() {
  if (finished_) return report_;
  advance_to(config_.duration);
  while (!queue_.empty()) {
    const Event e = queue_.top();
    queue_.pop();
    if (e.type != EventType::Deliver) continue;
    now_ = e.time;
    process(e);
  }
  accumulate_to(config_.duration);
  for (auto& s : report_.sessions) {
    if (nodes_[s.node].alive) {
      s.end = config_.duration;
      s.censored = true;
    }
  }
  finished_ = true;
  const std::uint64_t settled = report_.delivered + report_.dropped_departed + report_.expired;
  if (settled != report_.total_messages()) {
    throw InvariantViolation("message conservation: " + std::to_string(settled) + " settled vs " +
                             std::to_string(report_.total_messages()) + " transmitted");
  }
  return report_;
}

SimReport run(const SimConfig& config) {
  Simulation sim(config);
  return sim.finish();
}

}  // namespace gnutellab
