#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polarsim {

using NodeId = std::uint32_t;

enum class ArcInsert { inserted, already_present };

// Directed graph with sorted adjacency on both sides. Used both for the
// platform follow graph and for extracted personal networks.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t n) : out_(n), in_(n) {}

  std::size_t node_count() const { return out_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  void resize(std::size_t n) {
    out_.resize(n);
    in_.resize(n);
  }

  ArcInsert add_arc(NodeId src, NodeId dst) {
    if (src == dst) throw std::invalid_argument("self-follow: src == dst");
    auto& o = out_[src];
    auto it = std::lower_bound(o.begin(), o.end(), dst);
    if (it != o.end() && *it == dst) return ArcInsert::already_present;
    o.insert(it, dst);
    auto& i = in_[dst];
    i.insert(std::lower_bound(i.begin(), i.end(), src), src);
    ++arc_count_;
    return ArcInsert::inserted;
  }

  bool has_arc(NodeId src, NodeId dst) const {
    const auto& o = out_[src];
    return std::binary_search(o.begin(), o.end(), dst);
  }

  // out-neighbors of u = u's followings; in-neighbors = u's followers
  const std::vector<NodeId>& out(NodeId u) const { return out_[u]; }
  const std::vector<NodeId>& in(NodeId u) const { return in_[u]; }

  std::size_t out_degree(NodeId u) const { return out_[u].size(); }
  std::size_t in_degree(NodeId u) const { return in_[u].size(); }

 private:
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t arc_count_ = 0;
};

using FollowGraph = DirectedGraph;

}  // namespace polarsim
