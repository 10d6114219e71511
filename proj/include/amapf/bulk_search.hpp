#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "amapf/search_common.hpp"
#include "amapf/ten_network.hpp"

namespace amapf {

// A successor produced by expanding a whole bulk. `from_level` is the level,
// at the expanded node's vertex, where the generating edge leaves; it may lie
// above the expanded node, in which case the path to the successor climbs the
// sequence implicitly. -1 for successors of SOURCE.
struct BulkSuccessor {
  NetworkNode node;
  Level from_level = -1;
  EdgeKind kind = EdgeKind::kMove;
  bool backward = false;
};

// Successors of the bulk formed by `node` and every node above it in its
// connected-sequence. Boundary nodes (the sequence's low end, when `node` is
// that low end, and its high end) may carry reversed edges and are expanded
// node by node; interior outer levels only have forward move edges, so for
// each neighboring sequence only its lowest reachable inner node is emitted.
template <class F>
void for_each_bulk_successor(const TENetwork& net, const NetworkNode& node, F&& emit) {
  if (node.is_source()) {
    net.for_each_residual_neighbor(node, [&](const ResidualEdge& e) { emit(BulkSuccessor{e.to, -1, e.kind, e.backward}); });
    return;
  }
  if (!node.is_grid()) return;
  const VertexId v = node.vertex;
  const Level h = node.level;
  const ConnectedSequence seq = net.sequence_of(v, h);

  if (h == seq.lo) {
    net.for_each_residual_neighbor(node, [&](const ResidualEdge& e) { emit(BulkSuccessor{e.to, h, e.kind, e.backward}); });
  }
  if (seq.hi != h || h != seq.lo) {
    net.for_each_residual_neighbor(NetworkNode::grid(v, seq.hi),
                                   [&](const ResidualEdge& e) { emit(BulkSuccessor{e.to, seq.hi, e.kind, e.backward}); });
  }

  // interior outer levels [max(lo+1, h), hi-1]; the minimum outer one is first_out
  Level first_out = std::max(seq.lo + 1, h);
  if (!is_outer(first_out)) ++first_out;
  const Level last_out = seq.hi - 1;
  if (first_out > last_out) return;
  for (VertexId u : net.graph().neighbors(v)) {
    net.for_each_sequence(u, first_out + 1, last_out + 1, [&](const ConnectedSequence& cs) {
      Level min_inner = is_outer(cs.lo) ? cs.lo + 1 : cs.lo;
      Level target = std::max(min_inner, first_out + 1);
      if (target <= cs.hi && target - 1 <= last_out) {
        emit(BulkSuccessor{NetworkNode::grid(u, target), target - 1, EdgeKind::kMove, false});
      }
    });
  }
}

inline std::vector<BulkSuccessor> get_successors(const TENetwork& net, const NetworkNode& node) {
  std::vector<BulkSuccessor> out;
  for_each_bulk_successor(net, node, [&](const BulkSuccessor& s) { out.push_back(s); });
  return out;
}

struct SearchRecord {
  NetworkNode node;
  std::int32_t parent = -1;  // index into the record list; -1 for SOURCE
  Level from_level = -1;
  EdgeKind via = EdgeKind::kSource;
  bool backward = false;
};

// Bulk Search over the residual network. One instance may be reused across
// augmentation rounds; per-round state is reset by each call.
//
// OPEN is ordered by (level, vertex, insertion number). A popped node is
// skipped when a node of its connected-sequence at the same or lower level is
// already closed; a generated node is dropped when its sequence already has a
// node at the same or lower level in OPEN or CLOSED. SINK is keyed below every
// level, so the search stops right after the expansion that reaches it.
class BulkSearch {
 public:
  explicit BulkSearch(const TENetwork& net) : net_(&net) {}

  std::optional<NodePath> find_augmenting_path(SearchCounters& counters, const Deadline& deadline = {}) {
    auto sink = run(counters, deadline, true);
    if (!sink) return std::nullopt;
    return reconstruct_path(*sink);
  }

  // Runs to exhaustion without stopping at SINK; afterwards closed() and
  // covered_nodes() describe everything reachable from SOURCE.
  void explore(SearchCounters& counters, const Deadline& deadline = {}) { run(counters, deadline, false); }

  const std::vector<SearchRecord>& records() const noexcept { return records_; }
  const std::vector<std::int32_t>& closed() const noexcept { return closed_; }

  // GRID nodes expanded explicitly or implicitly (each closed node covers the
  // rest of its sequence above it).
  std::vector<NetworkNode> covered_nodes() const {
    std::vector<NetworkNode> out;
    std::unordered_map<std::uint64_t, Level> lowest;
    for (auto idx : closed_) {
      const auto& n = records_[idx].node;
      if (!n.is_grid()) continue;
      auto key = sequence_key(net_->sequence_of(n.vertex, n.level));
      auto [it, fresh] = lowest.try_emplace(key, n.level);
      if (!fresh) it->second = std::min(it->second, n.level);
    }
    for (auto [key, low] : lowest) {
      const auto v = static_cast<VertexId>(key >> 32);
      const auto seq = net_->sequence_of(v, low);
      for (Level l = low; l <= seq.hi; ++l) out.push_back(NetworkNode::grid(v, l));
    }
    return out;
  }

  // Explicit path from SOURCE to the record at `idx`, splicing the implicit
  // vertical climbs inside bulks and erasing any loops.
  NodePath reconstruct_path(std::int32_t idx) const {
    NodePath reversed{records_[idx].node};
    while (records_[idx].parent >= 0) {
      const SearchRecord& child = records_[idx];
      const SearchRecord& parent = records_[child.parent];
      if (parent.node.is_grid()) {
        const VertexId v = parent.node.vertex;
        if (child.from_level < parent.node.level) {
          throw NetworkConsistencyError("successor generated below its bulk");
        }
        for (Level l = child.from_level; l > parent.node.level; --l) {
          if (net_->is_cut(v, l - 1)) throw NetworkConsistencyError("implicit climb crosses a cut");
          reversed.push_back(NetworkNode::grid(v, l));
        }
      }
      reversed.push_back(parent.node);
      idx = child.parent;
    }
    std::reverse(reversed.begin(), reversed.end());
    return erase_loops(reversed);
  }

 private:
  struct OpenEntry {
    Level key;
    VertexId vertex;
    std::uint64_t seq_no;
    std::int32_t record;
    bool operator>(const OpenEntry& o) const {
      if (key != o.key) return key > o.key;
      if (vertex != o.vertex) return vertex > o.vertex;
      return seq_no > o.seq_no;
    }
  };

  static std::uint64_t sequence_key(const ConnectedSequence& s) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.vertex)) << 32) | static_cast<std::uint32_t>(s.lo);
  }

  static NodePath erase_loops(const NodePath& path) {
    NodePath out;
    std::unordered_map<NetworkNode, std::size_t, NetworkNodeHash> pos;
    for (const auto& n : path) {
      auto it = pos.find(n);
      if (it != pos.end()) {
        for (std::size_t i = it->second + 1; i < out.size(); ++i) pos.erase(out[i]);
        out.resize(it->second + 1);
        continue;
      }
      pos.emplace(n, out.size());
      out.push_back(n);
    }
    return out;
  }

  std::int32_t push(const SearchRecord& rec) {
    const auto idx = static_cast<std::int32_t>(records_.size());
    records_.push_back(rec);
    const Level key = rec.node.is_grid() ? rec.node.level : -1;
    open_.push(OpenEntry{key, rec.node.vertex, next_seq_no_++, idx});
    return idx;
  }

  std::optional<std::int32_t> run(SearchCounters& counters, const Deadline& deadline, bool stop_at_sink) {
    records_.clear();
    closed_.clear();
    open_ = {};
    min_closed_.clear();
    min_open_closed_.clear();
    next_seq_no_ = 0;
    bool source_closed = false;
    bool sink_seen = false;

    push(SearchRecord{NetworkNode::source()});
    while (!open_.empty()) {
      const OpenEntry top = open_.top();
      open_.pop();
      const NetworkNode node = records_[top.record].node;
      if (node.is_sink()) {
        if (stop_at_sink) return top.record;
        continue;
      }
      if (node.is_source()) {
        if (source_closed) continue;
        source_closed = true;
      } else {
        const auto key = sequence_key(net_->sequence_of(node.vertex, node.level));
        auto [it, fresh] = min_closed_.try_emplace(key, node.level);
        if (!fresh) {
          if (it->second <= node.level) continue;
          it->second = node.level;
        }
      }
      closed_.push_back(top.record);
      ++counters.expansions;
      deadline.poll(counters.expansions);

      for_each_bulk_successor(*net_, node, [&](const BulkSuccessor& s) {
        if (s.node.is_sink()) {
          if (sink_seen) return;
          sink_seen = true;
        } else {
          const auto key = sequence_key(net_->sequence_of(s.node.vertex, s.node.level));
          auto [it, fresh] = min_open_closed_.try_emplace(key, s.node.level);
          if (!fresh) {
            if (it->second <= s.node.level) return;
            it->second = s.node.level;
          }
        }
        push(SearchRecord{s.node, top.record, s.from_level, s.kind, s.backward});
        ++counters.generated;
      });
    }
    return std::nullopt;
  }

  const TENetwork* net_;
  std::vector<SearchRecord> records_;
  std::vector<std::int32_t> closed_;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open_;
  std::unordered_map<std::uint64_t, Level> min_closed_;
  std::unordered_map<std::uint64_t, Level> min_open_closed_;
  std::uint64_t next_seq_no_ = 0;
};

}  // namespace amapf
