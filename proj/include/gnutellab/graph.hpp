#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnutellab/error.hpp"

namespace gnutellab {

using NodeId = std::uint32_t;

// Per-servent metadata as reported in a PONG.
struct NodeInfo {
  std::string address;
  std::uint16_t port = 6346;
  std::string domain;
  std::string as_label;
  std::uint64_t files_shared = 0;
  std::uint64_t kbytes_shared = 0;

  friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

// Dotted-quad address in 10.0.0.0/8 derived from a node id.
std::string synthetic_address(NodeId id);

// Undirected overlay graph of servents.
//
// Node ids are dense slot indices. Removing a node leaves a hole so the
// remaining ids stay valid; `id_bound()` is one past the largest slot.
// Adjacency lists are kept sorted, which makes every traversal order
// independent of the order edges were inserted in.
class OverlayGraph {
 public:
  NodeId add_node(NodeInfo info = {});
  // Places a node at an explicit id (used by loaders); the slot must be free.
  void insert_node(NodeId id, NodeInfo info);
  void remove_node(NodeId id);

  // Returns false when the edge already exists (the call is then a no-op).
  bool add_edge(NodeId a, NodeId b);
  // Returns false when the edge does not exist.
  bool remove_edge(NodeId a, NodeId b);

  bool contains(NodeId id) const noexcept {
    return id < slots_.size() && slots_[id].present;
  }
  bool has_edge(NodeId a, NodeId b) const;

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  NodeId id_bound() const noexcept { return static_cast<NodeId>(slots_.size()); }

  std::span<const NodeId> neighbors(NodeId id) const;
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }

  const NodeInfo& info(NodeId id) const;
  NodeInfo& info(NodeId id);

  // Present node ids in ascending order.
  std::vector<NodeId> nodes() const;
  // Every edge once, as (smaller, larger), ascending.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Same node ids, node metadata and edge set.
  friend bool operator==(const OverlayGraph& a, const OverlayGraph& b);

 private:
  struct Slot {
    bool present = false;
    NodeInfo info;
    std::vector<NodeId> adjacency;
  };

  const Slot& slot(NodeId id) const;
  Slot& slot(NodeId id);

  std::vector<Slot> slots_;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
};

}  // namespace gnutellab
