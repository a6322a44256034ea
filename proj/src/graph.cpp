#include "gnutellab/graph.hpp"

#include <algorithm>

namespace gnutellab {

std::string synthetic_address(NodeId id) {
  return "10." + std::to_string((id >> 16) & 0xFF) + "." + std::to_string((id >> 8) & 0xFF) +
         "." + std::to_string(id & 0xFF);
}

const OverlayGraph::Slot& OverlayGraph::slot(NodeId id) const {
  if (!contains(id)) throw GraphError("unknown node id " + std::to_string(id));
  return slots_[id];
}

OverlayGraph::Slot& OverlayGraph::slot(NodeId id) {
  if (!contains(id)) throw GraphError("unknown node id " + std::to_string(id));
  return slots_[id];
}

NodeId OverlayGraph::add_node(NodeInfo info) {
  const auto id = static_cast<NodeId>(slots_.size());
  slots_.push_back(Slot{true, std::move(info), {}});
  ++node_count_;
  return id;
}

void OverlayGraph::insert_node(NodeId id, NodeInfo info) {
  if (id < slots_.size() && slots_[id].present) {
    throw GraphError("node id " + std::to_string(id) + " already present");
  }
  if (id >= slots_.size()) slots_.resize(static_cast<std::size_t>(id) + 1);
  slots_[id] = Slot{true, std::move(info), {}};
  ++node_count_;
}

void OverlayGraph::remove_node(NodeId id) {
  Slot& s = slot(id);
  for (NodeId other : s.adjacency) {
    auto& adj = slots_[other].adjacency;
    adj.erase(std::lower_bound(adj.begin(), adj.end(), id));
  }
  edge_count_ -= s.adjacency.size();
  s = Slot{};
  --node_count_;
}

bool OverlayGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw GraphError("self-loop on node " + std::to_string(a));
  Slot& sa = slot(a);
  Slot& sb = slot(b);
  auto pos = std::lower_bound(sa.adjacency.begin(), sa.adjacency.end(), b);
  if (pos != sa.adjacency.end() && *pos == b) return false;
  sa.adjacency.insert(pos, b);
  sb.adjacency.insert(std::lower_bound(sb.adjacency.begin(), sb.adjacency.end(), a), a);
  ++edge_count_;
  return true;
}

bool OverlayGraph::remove_edge(NodeId a, NodeId b) {
  Slot& sa = slot(a);
  Slot& sb = slot(b);
  auto pos = std::lower_bound(sa.adjacency.begin(), sa.adjacency.end(), b);
  if (pos == sa.adjacency.end() || *pos != b) return false;
  sa.adjacency.erase(pos);
  sb.adjacency.erase(std::lower_bound(sb.adjacency.begin(), sb.adjacency.end(), a));
  --edge_count_;
  return true;
}

bool OverlayGraph::has_edge(NodeId a, NodeId b) const {
  const auto& adj = slot(a).adjacency;
  if (!contains(b)) throw GraphError("unknown node id " + std::to_string(b));
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::span<const NodeId> OverlayGraph::neighbors(NodeId id) const { return slot(id).adjacency; }

const NodeInfo& OverlayGraph::info(NodeId id) const { return slot(id).info; }
NodeInfo& OverlayGraph::info(NodeId id) { return slot(id).info; }

std::vector<NodeId> OverlayGraph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(node_count_);
  for (NodeId id = 0; id < slots_.size(); ++id) {
    if (slots_[id].present) out.push_back(id);
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> OverlayGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId a = 0; a < slots_.size(); ++a) {
    for (NodeId b : slots_[a].adjacency) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool operator==(const OverlayGraph& a, const OverlayGraph& b) {
  if (a.node_count_ != b.node_count_ || a.edge_count_ != b.edge_count_) return false;
  const std::size_t bound = std::max(a.slots_.size(), b.slots_.size());
  for (std::size_t i = 0; i < bound; ++i) {
    const bool pa = i < a.slots_.size() && a.slots_[i].present;
    const bool pb = i < b.slots_.size() && b.slots_[i].present;
    if (pa != pb) return false;
    if (!pa) continue;
    if (a.slots_[i].info != b.slots_[i].info) return false;
    if (a.slots_[i].adjacency != b.slots_[i].adjacency) return false;
  }
  return true;
}

}  // namespace gnutellab
