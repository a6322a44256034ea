#include "gnutellab/protocol.hpp"

#include "gnutellab/csv.hpp"

namespace gnutellab {

std::uint64_t FloodTrace::transmission_count(MessageKind k) const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : transmissions) {
    if (std::get<2>(key) == k) total += count;
  }
  return total;
}

std::uint64_t FloodTrace::transmission_count() const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : transmissions) total += count;
  return total;
}

FloodTrace flood(const OverlayGraph& graph, NodeId source, MessageKind kind, int initial_ttl,
                 const FloodOptions& options) {
  if (!graph.contains(source)) throw GraphError("unknown flood source " + std::to_string(source));
  if (!is_broadcast(kind)) throw InvalidArgument("flood needs a broadcast kind");

  const NodeId bound = graph.id_bound();
  FloodTrace trace;
  trace.source = source;
  trace.kind = kind;
  trace.initial_ttl = initial_ttl;
  trace.received.assign(bound, 0);
  trace.processed.assign(bound, 0);
  trace.hops_at_receipt.assign(bound, -1);
  if (initial_ttl <= 0) {
    trace.origin_drops = 1;
    return trace;
  }

  std::vector<ServentState> states;
  states.reserve(bound);
  for (NodeId id = 0; id < bound; ++id) {
    ServentState s{id, {}, {}, std::numeric_limits<std::size_t>::max(),
                   RoutingMemory(options.memory_capacity), {}};
    if (graph.contains(id)) {
      s.info = graph.info(id);
      auto adj = graph.neighbors(id);
      s.neighbors.assign(adj.begin(), adj.end());
      if (auto it = options.files.find(id); it != options.files.end()) s.local_files = it->second;
    }
    states.push_back(std::move(s));
  }

  struct InFlight {
    NodeId from;
    NodeId to;
    Message msg;
  };
  std::vector<InFlight> round;
  std::vector<InFlight> next;
  auto transmit = [&](NodeId from, Send&& send) {
    if (options.on_transmit) options.on_transmit(from, send.to, send.msg);
    ++trace.transmissions[{from, send.to, send.msg.kind}];
    next.push_back(InFlight{from, send.to, std::move(send.msg)});
  };

  GuidSource guids(options.seed);
  Payload payload;
  if (kind == MessageKind::Query) payload = QueryPayload{options.query};
  auto start = originate(states[source], guids, kind, std::move(payload), initial_ttl);
  trace.hops_at_receipt[source] = 0;
  for (auto& s : start.sends) transmit(source, std::move(s));

  while (!next.empty()) {
    round.swap(next);
    next.clear();
    for (auto& f : round) {
      const bool broadcast = is_broadcast(f.msg.kind);
      bool fresh = false;
      if (broadcast) {
        ++trace.received[f.to];
        fresh = !states[f.to].memory.contains(f.msg.id);
      }
      for (auto& action : handle(states[f.to], f.msg, f.from)) {
        if (auto* send = std::get_if<Send>(&action)) {
          transmit(f.to, std::move(*send));
        } else if (auto* local = std::get_if<DeliverLocally>(&action)) {
          const auto& p = local->msg.payload;
          NodeId responder = 0;
          if (const auto* pong = std::get_if<PongPayload>(&p)) responder = pong->responder;
          if (const auto* hit = std::get_if<QueryHitPayload>(&p)) responder = hit->responder;
          trace.replies.push_back(FloodReply{responder, local->msg.hops});
        } else {
          switch (std::get<Drop>(action).reason) {
            case DropReason::Duplicate: ++trace.duplicates; break;
            case DropReason::Expired: ++trace.expired; break;
            default: ++trace.unroutable; break;
          }
        }
      }
      if (fresh && states[f.to].memory.contains(f.msg.id)) {
        ++trace.processed[f.to];
        if (trace.hops_at_receipt[f.to] < 0) trace.hops_at_receipt[f.to] = f.msg.hops + 1;
      }
    }
  }
  return trace;
}

void write_flood_csv(const FloodTrace& trace, std::ostream& out) {
  CsvWriter csv(out);
  csv.cells("edge", "direction", "kind", "count");
  for (const auto& [key, count] : trace.transmissions) {
    const auto [from, to, kind] = key;
    const NodeId a = std::min(from, to);
    const NodeId b = std::max(from, to);
    csv.cells(std::to_string(a) + "-" + std::to_string(b),
              std::to_string(from) + ">" + std::to_string(to), to_string(kind), count);
  }
}

}  // namespace gnutellab
