#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gnutellab/churn.hpp"
#include "gnutellab/graph.hpp"
#include "gnutellab/protocol.hpp"

namespace gnutellab {

// Default message sizes in bytes, indexed by MessageKind. These are
// assumptions: a 23-byte header plus a fixed body per kind.
inline constexpr std::array<std::uint32_t, 6> kDefaultMessageBytes = {23, 37, 33, 100, 49, 23};

struct SimConfig {
  std::size_t target_population = 1000;
  // (connection limit, weight) pairs.
  std::vector<std::pair<std::size_t, double>> max_connections_dist = {
      {3, 0.3}, {4, 0.3}, {6, 0.25}, {12, 0.1}, {24, 0.05}};
  // Nodes dial out until they hold ceil(dial_fraction * limit) connections
  // and accept incoming ones up to the limit.
  double dial_fraction = 1.0;
  int initial_ttl = 7;
  ChurnModel churn;
  std::size_t known_hosts = 4;
  std::size_t known_host_max_connections = 16;
  double ping_period = 60.0;  // seconds
  double query_rate = 0.0;    // queries per node-hour
  double duration = 600.0;    // seconds
  std::uint64_t seed = 1;
  std::array<std::uint32_t, 6> bytes_per_message = kDefaultMessageBytes;
  std::vector<std::string> query_catalog;  // empty selects a built-in catalog
  std::size_t files_per_node = 3;
  std::size_t host_cache_size = 64;
  std::size_t routing_memory = 512;
  std::size_t recent_joiners = 32;  // handed out by known hosts
  double hop_delay = 1.0;           // seconds per overlay hop
  std::vector<double> snapshot_times;
  double connectivity_interval = 0.0;  // 0 disables the time series
};

// Throws InvalidArgument naming the offending field.
void validate(const SimConfig& config);

// "nov2000", "mid2001", "churn", "crawl".
SimConfig sim_preset(std::string_view name);
std::vector<std::string> sim_preset_names();

struct KindTally {
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;
  friend bool operator==(const KindTally&, const KindTally&) = default;
};

struct SessionRecord {
  NodeId node = 0;
  double start = 0.0;  // seconds
  double end = 0.0;    // departure, or the run end when censored
  bool censored = false;       // still alive at the end of the run
  bool left_censored = false;  // already online when the run started
  bool known_host = false;
  std::size_t max_connections = 0;
  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

struct ConnectivitySample {
  double time = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double connections_per_node = 0.0;
  double largest_component_fraction = 0.0;
  friend bool operator==(const ConnectivitySample&, const ConnectivitySample&) = default;
};

struct Snapshot {
  double time = 0.0;
  OverlayGraph graph;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

using LinkKey = std::uint64_t;  // (smaller id << 32) | larger id
inline LinkKey link_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<LinkKey>(a) << 32) | b;
}

struct SimReport {
  double duration = 0.0;
  std::array<std::uint32_t, 6> bytes_per_message = kDefaultMessageBytes;
  std::array<KindTally, 6> traffic{};
  std::unordered_map<LinkKey, std::array<std::uint64_t, 6>> links;
  double connection_seconds = 0.0;
  // Every transmission ends up in exactly one of these.
  std::uint64_t delivered = 0;
  std::uint64_t dropped_departed = 0;
  std::uint64_t expired = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t pongs_delivered = 0;
  std::uint64_t queries_originated = 0;
  std::uint64_t query_hits_delivered = 0;
  std::map<NodeId, std::uint64_t> pings_originated;
  std::vector<SessionRecord> sessions;
  std::vector<ConnectivitySample> connectivity;
  std::vector<Snapshot> snapshots;

  std::uint64_t total_messages() const;
  std::uint64_t total_bytes() const;
  const KindTally& tally(MessageKind k) const { return traffic[static_cast<std::size_t>(k)]; }

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Discrete-event Gnutella network. Copyable, so a run can be forked and
// observed by different crawls on identical futures.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  double now() const noexcept { return now_; }
  const SimConfig& config() const noexcept { return config_; }

  // Processes every event with time <= t. Past the configured duration no
  // new pings, queries, arrivals or departures are started.
  void advance_to(double t);
  // Runs to the configured duration, drains in-flight messages and closes
  // the books. Idempotent.
  const SimReport& finish();

  bool alive(NodeId id) const { return id < nodes_.size() && nodes_[id].alive; }
  // Null when the node is not alive.
  const ServentState* servent(NodeId id) const;
  std::vector<NodeId> alive_nodes() const;
  const std::vector<NodeId>& known_host_ids() const noexcept { return known_hosts_; }
  OverlayGraph live_graph() const;

  // Partial until finish() has been called.
  const SimReport& report() const noexcept { return report_; }

 private:
  enum class EventType : std::uint8_t { Deliver, Join, Depart, Ping, Query, Arrival, Snapshot, Sample };
  struct Event {
    double time;
    std::uint64_t seq;
    EventType type;
    NodeId node;
    NodeId from;
    std::uint32_t slot;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  struct Node {
    bool alive = false;
    bool known_host = false;
    std::size_t dial_target = 0;
    std::size_t session = 0;  // index into report_.sessions
    double session_end = 0.0;
    ServentState state;
    std::deque<NodeId> cache;  // most recently learned first
  };

  void schedule(double time, EventType type, NodeId node, NodeId from = 0, std::uint32_t slot = 0);
  void process(const Event& e);
  void accumulate_to(double t);

  NodeId create_node(bool known_host, std::size_t limit);
  void join(NodeId id, bool left_censored);
  void depart(NodeId id);
  void bootstrap(NodeId id);
  void dial_from_cache(NodeId id);
  bool try_connect(NodeId a, NodeId b);
  void learn(NodeId id, NodeId peer);
  void originate_from(NodeId id, MessageKind kind, Payload payload);
  void transmit(NodeId from, Send&& send);
  void deliver(const Event& e);
  void record_sample();

  std::size_t draw_limit();
  double draw_session_hours(std::size_t limit, bool residual);
  double arrival_rate_per_second() const;

  SimConfig config_;
  std::mt19937_64 rng_;
  GuidSource guids_;
  std::discrete_distribution<std::size_t> limit_dist_;
  std::vector<std::string> catalog_;
  double now_ = 0.0;
  double accounted_to_ = 0.0;
  std::uint64_t seq_ = 0;
  bool finished_ = false;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<Message> pool_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<Node> nodes_;
  std::vector<NodeId> known_hosts_;
  std::deque<NodeId> recent_joiners_;
  std::size_t live_edges_ = 0;
  SimReport report_;
};

SimReport run(const SimConfig& config);

struct TrafficReport {
  std::array<double, 6> message_fraction{};
  std::array<double, 6> byte_fraction{};
  std::uint64_t total_messages = 0;
  std::uint64_t total_bytes = 0;
  double connection_seconds = 0.0;
  double per_connection_bytes_per_second = 0.0;  // 0 when no connection time

  double messages(MessageKind k) const { return message_fraction[static_cast<std::size_t>(k)]; }
  double bytes(MessageKind k) const { return byte_fraction[static_cast<std::size_t>(k)]; }
};

// Throws InvalidArgument when the report carries no messages.
TrafficReport traffic_report(const SimReport& report);

// Kaplan-Meier estimate of the session-length law from every session whose
// start was observed; sessions still running at the end are right-censored.
// fraction_shorter = F(short_hours), fraction_longer = 1 - F(long_hours).
struct SessionStats {
  std::size_t sessions = 0;
  bool observable = true;  // false when no session reached long_hours
  double fraction_shorter = 0.0;
  double fraction_longer = 0.0;
};

SessionStats session_statistics(const SimReport& report, double short_hours = 4.0,
                                 double long_hours = 24.0);

void write_traffic_csv(const SimReport& report, std::ostream& out);
void write_links_csv(const SimReport& report, std::ostream& out);
void write_sessions_csv(const SimReport& report, std::ostream& out);
void write_connectivity_csv(const SimReport& report, std::ostream& out);
// traffic.csv, links.csv, sessions.csv, connectivity.csv and one
// snapshot_<seconds>.graph per snapshot.
void export_report(const SimReport& report, const std::filesystem::path& dir);

}  // namespace gnutellab
