#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lfc/linalg.hpp"

namespace lfc {

/// Index used for the virtual leader wherever a neighbour index is expected.
inline constexpr int kLeader = -1;

/// Directed information link: `agent` receives the state of `neighbor`
/// (alpha_{agent,neighbor} != 0). Agents are 0-based; the leader is kLeader.
struct Edge {
  int agent = 0;
  int neighbor = 0;
  auto operator<=>(const Edge&) const = default;
};

struct WeightedEdge {
  int agent = 0;
  int neighbor = 0;
  double weight = 0.0;
};

struct PinLink {
  int agent = 0;
  double weight = 0.0;
};

/// Whether tau_ij and tau_ji are one channel or two.
enum class DelaySymmetry { shared, per_edge };

/// Dense channel indices (0-based). Follower channels are numbered in
/// row-major order of their canonical key: the unordered pair (min, max)
/// under `shared`, the directed pair under `per_edge`. Pin channels follow
/// ascending agent order.
struct DelayIndex {
  std::map<Edge, int> follower;
  std::map<int, int> pin;
  int follower_channels = 0;
  int pin_channels = 0;
};

DelayIndex build_delay_index(std::span<const WeightedEdge> follower_edges, std::span<const PinLink> pins,
                             DelaySymmetry symmetry = DelaySymmetry::shared);

class DirectedTopology {
 public:
  DirectedTopology(Matrix adjacency, Vector pinning, DelaySymmetry symmetry = DelaySymmetry::shared);

  int agents() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  const Vector& pinning() const { return pinning_; }
  double weight(int agent, int neighbor) const;
  DelaySymmetry symmetry() const { return symmetry_; }

  /// Row-major list of existing follower edges.
  const std::vector<WeightedEdge>& follower_edges() const { return edges_; }
  const std::vector<PinLink>& pins() const { return pins_; }
  std::vector<int> pinned_agents() const;
  bool is_pinned(int agent) const { return index_.pin.contains(agent); }

  const DelayIndex& delay_index() const { return index_; }
  int follower_channels() const { return index_.follower_channels; }
  int pin_channels() const { return index_.pin_channels; }
  int follower_channel(const Edge& e) const;
  int pin_channel(int agent) const;
  /// Directed edges carried by follower channel p.
  std::vector<Edge> channel_edges(int p) const;

 private:
  Matrix adjacency_;
  Vector pinning_;
  DelaySymmetry symmetry_;
  std::vector<WeightedEdge> edges_;
  std::vector<PinLink> pins_;
  DelayIndex index_;
};

/// True iff every follower is reachable from the leader along the
/// information-flow direction (j -> i whenever alpha_ij != 0, 0 -> i
/// whenever alpha_i0 != 0).
bool leader_globally_reachable(const DirectedTopology& topology);

std::string to_string(DelaySymmetry s);
DelaySymmetry delay_symmetry_from_string(const std::string& s);

}  // namespace lfc
