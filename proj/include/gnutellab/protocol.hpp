#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gnutellab/graph.hpp"

namespace gnutellab {

struct MessageId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend auto operator<=>(const MessageId&, const MessageId&) = default;
};

struct MessageIdHash {
  std::size_t operator()(const MessageId& id) const noexcept {
    return static_cast<std::size_t>(id.hi * 0x9E3779B97F4A7C15ULL ^ id.lo);
  }
};

enum class MessageKind : std::uint8_t { Ping, Pong, Query, QueryResponse, Push, Other };

inline constexpr std::array<MessageKind, 6> kAllKinds = {
    MessageKind::Ping,          MessageKind::Pong, MessageKind::Query,
    MessageKind::QueryResponse, MessageKind::Push, MessageKind::Other};

// "PING", "PONG", "QUERY", "QUERY_RESPONSE", "PUSH", "OTHER".
std::string_view to_string(MessageKind kind);
MessageKind parse_message_kind(std::string_view name);

constexpr bool is_broadcast(MessageKind k) {
  return k == MessageKind::Ping || k == MessageKind::Query;
}
constexpr bool is_backpropagated(MessageKind k) {
  return k == MessageKind::Pong || k == MessageKind::QueryResponse;
}

struct PongPayload {
  NodeId responder = 0;
  NodeInfo info;
};
struct QueryPayload {
  std::string search;
};
struct QueryHitPayload {
  NodeId responder = 0;
  std::vector<std::string> files;
};
using Payload = std::variant<std::monostate, PongPayload, QueryPayload, QueryHitPayload>;

struct Message {
  MessageId id;
  MessageKind kind = MessageKind::Ping;
  int ttl = 0;
  int hops = 0;
  Payload payload;
};

// Arrival link recorded for messages this node originated.
inline constexpr NodeId kSelfLink = std::numeric_limits<NodeId>::max();

// Bounded id -> arrival link map; the oldest entry is evicted first.
class RoutingMemory {
 public:
  static constexpr std::size_t kDefaultCapacity = 10000;

  explicit RoutingMemory(std::size_t capacity = kDefaultCapacity);

  bool contains(const MessageId& id) const { return links_.count(id) != 0; }
  std::optional<NodeId> lookup(const MessageId& id) const;
  // Records id -> link; a no-op returning false when id is already known.
  bool insert(const MessageId& id, NodeId link);

  std::size_t size() const noexcept { return links_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<MessageId> order_;
  std::unordered_map<MessageId, NodeId, MessageIdHash> links_;
};

struct ServentState {
  NodeId self = 0;
  NodeInfo info;
  std::vector<NodeId> neighbors;  // sorted
  std::size_t max_connections = std::numeric_limits<std::size_t>::max();
  RoutingMemory memory;
  std::vector<std::string> local_files;

  bool is_neighbor(NodeId id) const;
  bool at_capacity() const { return neighbors.size() >= max_connections; }
  // False when already connected or at the connection limit.
  bool connect(NodeId id);
  bool disconnect(NodeId id);
};

// Seeded source of 128-bit message ids.
class GuidSource {
 public:
  explicit GuidSource(std::uint64_t seed) : rng_(seed) {}
  MessageId next() { return MessageId{rng_(), rng_()}; }

 private:
  std::mt19937_64 rng_;
};

struct Send {
  NodeId to;
  Message msg;
};
struct DeliverLocally {
  Message msg;
};
enum class DropReason { Duplicate, Unroutable, Malformed, NotNeighbor, Expired };
std::string_view to_string(DropReason reason);
struct Drop {
  DropReason reason;
};
using Action = std::variant<Send, DeliverLocally, Drop>;

struct Origination {
  Message msg;
  std::vector<Send> sends;
};

// Starts a PING or QUERY at `state`: records the id against kSelfLink and
// addresses one copy (ttl = initial_ttl, hops = 0) to every neighbor.
Origination originate(ServentState& state, GuidSource& guids, MessageKind kind, Payload payload,
                      int initial_ttl);

// Processes one received message. Broadcasts are checked for duplicates
// before the ttl is touched; replies reuse the request id and carry
// ttl = hops travelled so they expire exactly at the originator. A
// broadcast arriving with ttl 0 is answered but not forwarded.
std::vector<Action> handle(ServentState& state, const Message& msg, NodeId from);

// Case-insensitive substring match of `search` against the file names.
std::vector<std::string> match_files(const std::vector<std::string>& files,
                                     std::string_view search);

struct FloodOptions {
  std::size_t memory_capacity = RoutingMemory::kDefaultCapacity;
  std::uint64_t seed = 1;
  std::string query;  // search string for QUERY floods
  std::map<NodeId, std::vector<std::string>> files;
  // Called for every transmission, in order, before delivery.
  std::function<void(NodeId from, NodeId to, const Message&)> on_transmit;
};

struct FloodReply {
  NodeId responder;
  int hops;  // reverse path length
};

struct FloodTrace {
  NodeId source = 0;
  MessageKind kind = MessageKind::Ping;
  int initial_ttl = 0;
  std::vector<std::uint32_t> received;   // broadcast copies arriving per node slot
  std::vector<std::uint32_t> processed;  // copies processed (not dropped) per node slot
  std::vector<int> hops_at_receipt;      // hops of the processed copy; -1 if never reached
  std::map<std::tuple<NodeId, NodeId, MessageKind>, std::uint64_t> transmissions;
  std::vector<FloodReply> replies;  // delivered at the source, in arrival order
  std::uint64_t duplicates = 0;
  std::uint64_t expired = 0;
  std::uint64_t unroutable = 0;
  std::uint64_t origin_drops = 0;  // 1 when the flood was started with ttl 0

  std::uint64_t transmission_count(MessageKind kind) const;
  std::uint64_t transmission_count() const;
  bool reached(NodeId id) const { return id < hops_at_receipt.size() && hops_at_receipt[id] >= 0; }
};

// Runs a single broadcast from `source` to quiescence in synchronous hop
// rounds, every node running the protocol engine with its graph neighbors.
FloodTrace flood(const OverlayGraph& graph, NodeId source, MessageKind kind, int initial_ttl,
                 const FloodOptions& options = {});

// Columns edge, direction, kind, count; edge is "a-b" with a < b and
// direction is "a>b" or "b>a".
void write_flood_csv(const FloodTrace& trace, std::ostream& out);

}  // namespace gnutellab
