#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "amapf/graph.hpp"
#include "amapf/instance.hpp"

namespace amapf {

// Single integer axis over the copies 0, 1, 1', 2, 2', ..., T':
// level 0 is copy 0, odd level 2t-1 is the inner copy t, even level 2t (t >= 1)
// is the outer copy t'. Vertical edge c joins levels c and c+1 at one vertex;
// it is a wait edge when c is even and a restriction edge when c is odd.
using Level = std::int32_t;

inline constexpr bool is_outer(Level level) noexcept { return level % 2 == 0; }

enum class NodeKind : std::uint8_t { kSource, kSink, kGrid };

struct NetworkNode {
  NodeKind kind = NodeKind::kGrid;
  VertexId vertex = kNoVertex;
  Level level = -1;

  static constexpr NetworkNode source() noexcept { return {NodeKind::kSource, kNoVertex, -1}; }
  static constexpr NetworkNode sink() noexcept { return {NodeKind::kSink, kNoVertex, -1}; }
  static constexpr NetworkNode grid(VertexId v, Level l) noexcept { return {NodeKind::kGrid, v, l}; }

  bool is_grid() const noexcept { return kind == NodeKind::kGrid; }
  bool is_source() const noexcept { return kind == NodeKind::kSource; }
  bool is_sink() const noexcept { return kind == NodeKind::kSink; }

  friend bool operator==(const NetworkNode&, const NetworkNode&) = default;
};

struct NetworkNodeHash {
  std::size_t operator()(const NetworkNode& n) const noexcept {
    std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.vertex)) << 32) ^
                        static_cast<std::uint32_t>(n.level) ^ (static_cast<std::uint64_t>(n.kind) << 62);
    return std::hash<std::uint64_t>{}(key * 0x9E3779B97F4A7C15ull);
  }
};

using NodePath = std::vector<NetworkNode>;

enum class EdgeKind : std::uint8_t { kSource, kSink, kMove, kWait, kRestriction };

// One residual step. `backward` means the step traverses a reversed edge
// against its original direction (cancelling a unit of flow).
struct ResidualEdge {
  NetworkNode to;
  EdgeKind kind = EdgeKind::kMove;
  bool backward = false;
};

inline constexpr EdgeKind vertical_kind(Level c) noexcept {
  return is_outer(c) ? EdgeKind::kWait : EdgeKind::kRestriction;
}

struct ConnectedSequence {
  VertexId vertex = kNoVertex;
  Level lo = 0;
  Level hi = 0;

  bool contains(Level l) const noexcept { return l >= lo && l <= hi; }
  friend bool operator==(const ConnectedSequence&, const ConnectedSequence&) = default;
};

// Sorted set of reversed vertical edges at one vertex. Cuts per vertex stay
// few, so a sorted vector beats a node-based set.
class CutSet {
 public:
  bool empty() const noexcept { return cuts_.empty(); }
  std::size_t size() const noexcept { return cuts_.size(); }
  std::span<const Level> values() const noexcept { return cuts_; }

  bool contains(Level c) const { return std::binary_search(cuts_.begin(), cuts_.end(), c); }

  bool insert(Level c) {
    auto it = std::lower_bound(cuts_.begin(), cuts_.end(), c);
    if (it != cuts_.end() && *it == c) return false;
    cuts_.insert(it, c);
    return true;
  }

  bool erase(Level c) {
    auto it = std::lower_bound(cuts_.begin(), cuts_.end(), c);
    if (it == cuts_.end() || *it != c) return false;
    cuts_.erase(it);
    return true;
  }

  // Maximal uncut interval containing `level` within [0, top].
  std::pair<Level, Level> bounds(Level level, Level top) const {
    auto it = std::lower_bound(cuts_.begin(), cuts_.end(), level);
    Level hi = it == cuts_.end() ? top : *it;
    Level lo = it == cuts_.begin() ? 0 : *(it - 1) + 1;
    return {lo, hi};
  }

 private:
  std::vector<Level> cuts_;
};

// A reversed move edge seen from one of its endpoints: `level` is the level
// of that endpoint, `peer` the vertex at the other end.
struct MoveMark {
  Level level;
  VertexId peer;
  friend auto operator<=>(const MoveMark&, const MoveMark&) = default;
};

class MoveMarks {
 public:
  std::span<const MoveMark> values() const noexcept { return marks_; }
  bool empty() const noexcept { return marks_.empty(); }

  bool contains(Level level, VertexId peer) const {
    return std::binary_search(marks_.begin(), marks_.end(), MoveMark{level, peer});
  }
  // Any mark at `level`; flow conservation admits at most one.
  std::optional<VertexId> peer_at(Level level) const {
    auto it = std::lower_bound(marks_.begin(), marks_.end(), MoveMark{level, std::numeric_limits<VertexId>::min()});
    if (it != marks_.end() && it->level == level) return it->peer;
    return std::nullopt;
  }
  bool insert(Level level, VertexId peer) {
    MoveMark m{level, peer};
    auto it = std::lower_bound(marks_.begin(), marks_.end(), m);
    if (it != marks_.end() && *it == m) return false;
    marks_.insert(it, m);
    return true;
  }
  bool erase(Level level, VertexId peer) {
    MoveMark m{level, peer};
    auto it = std::lower_bound(marks_.begin(), marks_.end(), m);
    if (it == marks_.end() || *it != m) return false;
    marks_.erase(it);
    return true;
  }

 private:
  std::vector<MoveMark> marks_;
};

// Thrown when the network state contradicts an operation (non-residual step,
// dangling flow, broken invariant). Always a bug, never an input problem.
class NetworkConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Implicit time-expanded unit-capacity network for a T-step instance.
// Only the reversed edges are stored: per-vertex cut sets, per-vertex
// reversed-move marks, and the source/sink usage flags. Every edge has
// capacity 1, so an edge carries flow iff it is reversed.
class TENetwork {
 public:
  TENetwork(const Instance& instance, int horizon)
      : graph_(instance.graph), horizon_(horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon T must be >= 1");
    if (!graph_) throw std::invalid_argument("instance has no graph");
    const auto n = static_cast<std::size_t>(graph_->vertex_count());
    cuts_.resize(n);
    out_moves_.resize(n);
    in_moves_.resize(n);
    start_index_.assign(n, -1);
    goal_index_.assign(n, -1);
    starts_ = instance.starts;
    goals_ = instance.goals;
    for (std::size_t i = 0; i < starts_.size(); ++i) start_index_[starts_[i]] = static_cast<std::int32_t>(i);
    for (std::size_t i = 0; i < goals_.size(); ++i) goal_index_[goals_[i]] = static_cast<std::int32_t>(i);
    source_used_.assign(starts_.size(), 0);
    sink_used_.assign(goals_.size(), 0);
  }

  const Graph& graph() const noexcept { return *graph_; }
  int horizon() const noexcept { return horizon_; }
  Level top_level() const noexcept { return 2 * horizon_; }
  std::size_t level_count() const noexcept { return static_cast<std::size_t>(2 * horizon_ + 1); }
  std::span<const VertexId> starts() const noexcept { return starts_; }
  std::span<const VertexId> goals() const noexcept { return goals_; }

  std::size_t flow_value() const noexcept { return flow_value_; }
  std::size_t total_cuts() const noexcept { return total_cuts_; }
  std::size_t reversed_move_count() const noexcept { return reversed_moves_; }
  // Number of connected-sequences currently present: one per vertex plus one
  // per cut.
  std::size_t sequence_count() const noexcept {
    return static_cast<std::size_t>(graph_->vertex_count()) + total_cuts_;
  }

  const CutSet& cuts(VertexId v) const { return cuts_[v]; }
  bool is_cut(VertexId v, Level c) const { return cuts_[v].contains(c); }
  bool move_reversed(VertexId from, Level level, VertexId to) const {
    return out_moves_[from].contains(level, to);
  }
  bool source_used(std::size_t start_idx) const { return source_used_[start_idx] != 0; }
  bool sink_used(std::size_t goal_idx) const { return sink_used_[goal_idx] != 0; }
  std::int32_t start_index(VertexId v) const { return start_index_[v]; }
  std::int32_t goal_index(VertexId v) const { return goal_index_[v]; }

  ConnectedSequence sequence_of(VertexId v, Level level) const {
    auto [lo, hi] = cuts_[v].bounds(level, top_level());
    return {v, lo, hi};
  }

  // Calls f(ConnectedSequence) for each sequence at v intersecting [from, to].
  template <class F>
  void for_each_sequence(VertexId v, Level from, Level to, F&& f) const {
    Level l = std::max<Level>(from, 0);
    const Level end = std::min(to, top_level());
    while (l <= end) {
      ConnectedSequence cs = sequence_of(v, l);
      f(cs);
      l = cs.hi + 1;
    }
  }

  // Calls f(const ResidualEdge&) for each one-step residual successor of
  // `node`. SOURCE is never produced: no augmenting path re-enters it.
  template <class F>
  void for_each_residual_neighbor(const NetworkNode& node, F&& f) const {
    if (node.is_source()) {
      for (std::size_t i = 0; i < starts_.size(); ++i) {
        if (!source_used_[i]) f(ResidualEdge{NetworkNode::grid(starts_[i], 0), EdgeKind::kSource, false});
      }
      return;
    }
    if (node.is_sink()) return;
    const VertexId v = node.vertex;
    const Level l = node.level;
    const Level top = top_level();
    const CutSet& cut = cuts_[v];
    if (l < top && !cut.contains(l)) f(ResidualEdge{NetworkNode::grid(v, l + 1), vertical_kind(l), false});
    if (l > 0 && cut.contains(l - 1)) f(ResidualEdge{NetworkNode::grid(v, l - 1), vertical_kind(l - 1), true});
    if (is_outer(l)) {
      if (l < top) {
        for (VertexId u : graph_->neighbors(v)) {
          if (!out_moves_[v].contains(l, u)) f(ResidualEdge{NetworkNode::grid(u, l + 1), EdgeKind::kMove, false});
        }
      } else {
        const auto gi = goal_index_[v];
        if (gi >= 0 && !sink_used_[gi]) f(ResidualEdge{NetworkNode::sink(), EdgeKind::kSink, false});
      }
    } else {
      for (const MoveMark& m : in_moves_[v].values()) {
        if (m.level == l) f(ResidualEdge{NetworkNode::grid(m.peer, l - 1), EdgeKind::kMove, true});
      }
    }
  }

  std::vector<ResidualEdge> residual_neighbors(const NetworkNode& node) const {
    std::vector<ResidualEdge> out;
    for_each_residual_neighbor(node, [&](const ResidualEdge& e) { out.push_back(e); });
    return out;
  }

  // The residual edge a -> b, if a single residual step joins them.
  std::optional<ResidualEdge> residual_step(const NetworkNode& a, const NetworkNode& b) const {
    std::optional<ResidualEdge> found;
    for_each_residual_neighbor(a, [&](const ResidualEdge& e) {
      if (e.to == b) found = e;
    });
    return found;
  }

  // Flips every edge of a SOURCE -> SINK residual path: forward steps become
  // reversed, backward steps are un-reversed. Throws NetworkConsistencyError
  // if any step is not currently residual; the network is left untouched then.
  void reverse_path(std::span<const NetworkNode> path) {
    if (path.size() < 2 || !path.front().is_source() || !path.back().is_sink()) {
      throw NetworkConsistencyError("augmenting path must run from SOURCE to SINK");
    }
    std::unordered_set<NetworkNode, NetworkNodeHash> seen;
    for (const auto& n : path) {
      if (!seen.insert(n).second) throw NetworkConsistencyError("augmenting path revisits a node");
    }
    std::vector<ResidualEdge> steps;
    steps.reserve(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto step = residual_step(path[i], path[i + 1]);
      if (!step) throw NetworkConsistencyError("step " + std::to_string(i) + " of augmenting path is not residual");
      steps.push_back(*step);
    }
    for (std::size_t i = 0; i < steps.size(); ++i) apply_step(path[i], steps[i]);
    ++flow_value_;
  }

  // One GRID-node path per unit of flow, following reversed edges from each
  // used start until a used goal at the top level.
  std::vector<NodePath> extract_flow_paths() const {
    std::vector<NodePath> paths;
    std::vector<char> goal_reached(goals_.size(), 0);
    for (std::size_t i = 0; i < starts_.size(); ++i) {
      if (!source_used_[i]) continue;
      NodePath path;
      NetworkNode cur = NetworkNode::grid(starts_[i], 0);
      path.push_back(cur);
      while (true) {
        const VertexId v = cur.vertex;
        const Level l = cur.level;
        if (l == top_level()) {
          const auto gi = goal_index_[v];
          if (gi < 0 || !sink_used_[gi] || goal_reached[gi]) {
            throw NetworkConsistencyError("dangling flow at top level");
          }
          goal_reached[gi] = 1;
          break;
        }
        if (cuts_[v].contains(l)) {
          cur = NetworkNode::grid(v, l + 1);
        } else if (auto peer = is_outer(l) ? out_moves_[v].peer_at(l) : std::nullopt) {
          cur = NetworkNode::grid(*peer, l + 1);
        } else {
          throw NetworkConsistencyError("dangling flow: no reversed outgoing edge");
        }
        path.push_back(cur);
      }
      paths.push_back(std::move(path));
    }
    return paths;
  }

  // Flow conservation at every GRID node touched by a reversed edge, and
  // equal counts of used source and sink edges.
  void check_conservation() const {
    std::size_t used_sources = 0, used_sinks = 0;
    for (auto u : source_used_) used_sources += u;
    for (auto u : sink_used_) used_sinks += u;
    if (used_sources != used_sinks || used_sources != flow_value_) {
      throw NetworkConsistencyError("terminal flow mismatch");
    }
    std::vector<Level> levels;
    for (VertexId v = 0; v < graph_->vertex_count(); ++v) {
      levels.clear();
      for (Level c : cuts_[v].values()) {
        levels.push_back(c);
        levels.push_back(c + 1);
      }
      for (const auto& m : out_moves_[v].values()) levels.push_back(m.level);
      for (const auto& m : in_moves_[v].values()) levels.push_back(m.level);
      if (start_index_[v] >= 0 && source_used_[start_index_[v]]) levels.push_back(0);
      if (goal_index_[v] >= 0 && sink_used_[goal_index_[v]]) levels.push_back(top_level());
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      for (Level l : levels) {
        int in = 0, out = 0;
        if (l > 0 && cuts_[v].contains(l - 1)) ++in;
        if (l < top_level() && cuts_[v].contains(l)) ++out;
        if (!is_outer(l) && in_moves_[v].peer_at(l)) ++in;
        if (is_outer(l) && out_moves_[v].peer_at(l)) ++out;
        if (l == 0 && start_index_[v] >= 0 && source_used_[start_index_[v]]) ++in;
        if (l == top_level() && goal_index_[v] >= 0 && sink_used_[goal_index_[v]]) ++out;
        if (in != out || in > 1) {
          throw NetworkConsistencyError("flow conservation violated at vertex " + std::to_string(v) + " level " +
                                        std::to_string(l));
        }
      }
    }
  }

  // Every reversed move edge touches its endpoints' sequences only at their
  // boundaries: the outer tail is the sequence's low end and the inner head is
  // the sequence's high end.
  void check_move_locality() const {
    for (VertexId v = 0; v < graph_->vertex_count(); ++v) {
      for (const auto& m : out_moves_[v].values()) {
        if (sequence_of(v, m.level).lo != m.level) {
          throw NetworkConsistencyError("reversed move leaves the interior of a sequence at vertex " +
                                        std::to_string(v));
        }
      }
      for (const auto& m : in_moves_[v].values()) {
        if (sequence_of(v, m.level).hi != m.level) {
          throw NetworkConsistencyError("reversed move enters the interior of a sequence at vertex " +
                                        std::to_string(v));
        }
      }
    }
  }

 private:
  void apply_step(const NetworkNode& from, const ResidualEdge& e) {
    switch (e.kind) {
      case EdgeKind::kSource:
        source_used_[start_index_[e.to.vertex]] = 1;
        return;
      case EdgeKind::kSink:
        sink_used_[goal_index_[from.vertex]] = 1;
        return;
      case EdgeKind::kWait:
      case EdgeKind::kRestriction:
        if (e.backward) {
          cuts_[from.vertex].erase(e.to.level);
          --total_cuts_;
        } else {
          cuts_[from.vertex].insert(from.level);
          ++total_cuts_;
        }
        return;
      case EdgeKind::kMove:
        if (e.backward) {
          // from is the inner head, e.to the outer tail of the reversed move
          out_moves_[e.to.vertex].erase(e.to.level, from.vertex);
          in_moves_[from.vertex].erase(from.level, e.to.vertex);
          --reversed_moves_;
        } else {
          out_moves_[from.vertex].insert(from.level, e.to.vertex);
          in_moves_[e.to.vertex].insert(e.to.level, from.vertex);
          ++reversed_moves_;
        }
        return;
    }
  }

  std::shared_ptr<const Graph> graph_;
  int horizon_;
  std::vector<VertexId> starts_, goals_;
  std::vector<std::int32_t> start_index_, goal_index_;
  std::vector<CutSet> cuts_;
  std::vector<MoveMarks> out_moves_;  // keyed by the outer tail level
  std::vector<MoveMarks> in_moves_;   // keyed by the inner head level
  std::vector<std::uint8_t> source_used_, sink_used_;
  std::size_t flow_value_ = 0;
  std::size_t total_cuts_ = 0;
  std::size_t reversed_moves_ = 0;
};

}  // namespace amapf
