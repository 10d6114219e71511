#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "amapf/search_common.hpp"
#include "amapf/ten_network.hpp"

namespace amapf {

// Plain FIFO breadth-first augmenting-path search visiting network nodes one
// at a time. Node bookkeeping is dense (stamped arrays sized (2T+1)|V|) up to
// kDenseLimit nodes and hashed beyond that.
class BaselineSearch {
 public:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;

  explicit BaselineSearch(const TENetwork& net)
      : net_(&net),
        levels_(static_cast<std::int64_t>(net.level_count())),
        node_total_(static_cast<std::uint64_t>(net.graph().vertex_count()) * net.level_count()),
        dense_(node_total_ <= kDenseLimit) {
    if (dense_) {
      stamp_.assign(node_total_, 0);
      parent_.assign(node_total_, kSourceId);
    }
  }

  // Returns a SOURCE -> SINK path or nullopt. Each dequeue counts as one
  // expansion; SINK ends the search as soon as it is generated.
  std::optional<NodePath> find_augmenting_path(SearchCounters& counters, const Deadline& deadline = {}) {
    auto sink_parent = run(counters, deadline, true);
    if (!sink_parent) return std::nullopt;
    NodePath reversed{NetworkNode::sink()};
    for (std::int64_t id = *sink_parent; id != kSourceId; id = parent_of(id)) reversed.push_back(node_of(id));
    reversed.push_back(NetworkNode::source());
    return NodePath(reversed.rbegin(), reversed.rend());
  }

  // Visits every node reachable from SOURCE; returns the GRID nodes.
  std::vector<NetworkNode> explore(SearchCounters& counters, const Deadline& deadline = {}) {
    run(counters, deadline, false);
    std::vector<NetworkNode> out;
    out.reserve(queue_.size());
    for (std::int64_t id : queue_)
      if (id != kSourceId) out.push_back(node_of(id));
    return out;
  }

 private:
  static constexpr std::int64_t kSourceId = -1;

  std::int64_t id_of(const NetworkNode& n) const { return std::int64_t{n.vertex} * levels_ + n.level; }
  NetworkNode node_of(std::int64_t id) const {
    return NetworkNode::grid(static_cast<VertexId>(id / levels_), static_cast<Level>(id % levels_));
  }

  bool visit(std::int64_t id, std::int64_t parent) {
    if (dense_) {
      if (stamp_[id] == round_) return false;
      stamp_[id] = round_;
      parent_[id] = parent;
      return true;
    }
    return sparse_parent_.try_emplace(id, parent).second;
  }
  std::int64_t parent_of(std::int64_t id) const { return dense_ ? parent_[id] : sparse_parent_.at(id); }

  std::optional<std::int64_t> run(SearchCounters& counters, const Deadline& deadline, bool stop_at_sink) {
    ++round_;
    sparse_parent_.clear();
    queue_.clear();
    queue_.push_back(kSourceId);
    std::optional<std::int64_t> sink_parent;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::int64_t id = queue_[head];
      ++counters.expansions;
      deadline.poll(counters.expansions);
      const NetworkNode node = id == kSourceId ? NetworkNode::source() : node_of(id);
      net_->for_each_residual_neighbor(node, [&](const ResidualEdge& e) {
        if (sink_parent) return;
        if (e.to.is_sink()) {
          if (stop_at_sink) sink_parent = id;
          return;
        }
        const std::int64_t next = id_of(e.to);
        if (visit(next, id)) {
          queue_.push_back(next);
          ++counters.generated;
        }
      });
      if (sink_parent) return sink_parent;
    }
    return std::nullopt;
  }

  const TENetwork* net_;
  std::int64_t levels_;
  std::uint64_t node_total_;
  bool dense_;
  std::uint32_t round_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::int64_t> parent_;
  std::unordered_map<std::int64_t, std::int64_t> sparse_parent_;
  std::vector<std::int64_t> queue_;
};

}  // namespace amapf
