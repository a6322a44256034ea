#include "gnutellab/protocol.hpp"

#include <algorithm>
#include <cctype>

namespace gnutellab {
namespace {

constexpr std::array<std::string_view, 6> kKindNames = {"PING", "PONG", "QUERY",
                                                        "QUERY_RESPONSE", "PUSH", "OTHER"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(MessageKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

MessageKind parse_message_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<MessageKind>(i);
  }
  throw InvalidArgument("unknown message kind '" + std::string(name) + "'");
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::Duplicate: return "duplicate";
    case DropReason::Unroutable: return "unroutable";
    case DropReason::Malformed: return "malformed";
    case DropReason::NotNeighbor: return "not-neighbor";
    case DropReason::Expired: return "expired";
  }
  return "unknown";
}

RoutingMemory::RoutingMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("routing memory capacity must be positive");
}

std::optional<NodeId> RoutingMemory::lookup(const MessageId& id) const {
  auto it = links_.find(id);
  if (it == links_.end()) return std::nullopt;
  return it->second;
}

bool RoutingMemory::insert(const MessageId& id, NodeId link) {
  if (!links_.emplace(id, link).second) return false;
  order_.push_back(id);
  if (order_.size() > capacity_) {
    links_.erase(order_.front());
    order_.pop_front();
  }
  return true;
}

bool ServentState::is_neighbor(NodeId id) const {
  return std::binary_search(neighbors.begin(), neighbors.end(), id);
}

bool ServentState::connect(NodeId id) {
  if (id == self || at_capacity()) return false;
  auto pos = std::lower_bound(neighbors.begin(), neighbors.end(), id);
  if (pos != neighbors.end() && *pos == id) return false;
  neighbors.insert(pos, id);
  return true;
}

bool ServentState::disconnect(NodeId id) {
  auto pos = std::lower_bound(neighbors.begin(), neighbors.end(), id);
  if (pos == neighbors.end() || *pos != id) return false;
  neighbors.erase(pos);
  return true;
}

std::vector<std::string> match_files(const std::vector<std::string>& files,
                                     std::string_view search) {
  std::vector<std::string> out;
  const std::string needle = lower(search);
  for (const auto& f : files) {
    if (lower(f).find(needle) != std::string::npos) out.push_back(f);
  }
  return out;
}

Origination originate(ServentState& state, GuidSource& guids, MessageKind kind, Payload payload,
                      int initial_ttl) {
  if (!is_broadcast(kind)) throw InvalidArgument("only PING and QUERY can be originated");
  if (initial_ttl < 1) throw InvalidArgument("initial ttl must be at least 1");
  Origination out;
  out.msg = Message{guids.next(), kind, initial_ttl, 0, std::move(payload)};
  state.memory.insert(out.msg.id, kSelfLink);
  out.sends.reserve(state.neighbors.size());
  for (NodeId n : state.neighbors) out.sends.push_back(Send{n, out.msg});
  return out;
}

std::vector<Action> handle(ServentState& state, const Message& msg, NodeId from) {
  if (msg.ttl < 0 || msg.hops < 0) return {Drop{DropReason::Malformed}};
  if (!state.is_neighbor(from)) return {Drop{DropReason::NotNeighbor}};

  std::vector<Action> actions;
  if (is_broadcast(msg.kind)) {
    if (state.memory.contains(msg.id)) return {Drop{DropReason::Duplicate}};
    state.memory.insert(msg.id, from);
    Message fwd = msg;
    --fwd.ttl;
    ++fwd.hops;
    // A ttl 0 arrival is still answered, just never forwarded.
    if (fwd.ttl > 0) {
      for (NodeId n : state.neighbors) {
        if (n != from) actions.push_back(Send{n, fwd});
      }
    }
    if (msg.kind == MessageKind::Ping) {
      Message pong{msg.id, MessageKind::Pong, fwd.hops, 0, PongPayload{state.self, state.info}};
      actions.push_back(Send{from, std::move(pong)});
    } else if (const auto* q = std::get_if<QueryPayload>(&msg.payload)) {
      auto hits = match_files(state.local_files, q->search);
      if (!hits.empty()) {
        Message hit{msg.id, MessageKind::QueryResponse, fwd.hops, 0,
                    QueryHitPayload{state.self, std::move(hits)}};
        actions.push_back(Send{from, std::move(hit)});
      }
    }
    return actions;
  }

  if (is_backpropagated(msg.kind)) {
    const auto link = state.memory.lookup(msg.id);
    if (!link) return {Drop{DropReason::Unroutable}};
    Message back = msg;
    --back.ttl;
    ++back.hops;
    if (*link == kSelfLink) return {DeliverLocally{std::move(back)}};
    if (back.ttl <= 0) return {Drop{DropReason::Expired}};
    if (!state.is_neighbor(*link)) return {Drop{DropReason::Unroutable}};
    return {Send{*link, std::move(back)}};
  }

  return {DeliverLocally{msg}};
}

}  // namespace gnutellab
