#include "lfc/graph_topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "lfc/error.hpp"

namespace lfc {

namespace {

std::string pair_text(int i, int j) {
  const auto name = [](int k) { return k == kLeader ? std::string("0") : std::to_string(k + 1); };
  return "(" + name(i) + "," + name(j) + ")";
}

}  // namespace

DelayIndex build_delay_index(std::span<const WeightedEdge> follower_edges, std::span<const PinLink> pins,
                             DelaySymmetry symmetry) {
  DelayIndex index;

  std::set<Edge> seen;
  for (const auto& e : follower_edges) {
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge " + pair_text(e.agent, e.neighbor) + " has a negative or non-finite weight");
    if (e.agent == e.neighbor) throw ValidationError("self-loop " + pair_text(e.agent, e.neighbor));
    if (e.agent < 0 || e.neighbor < 0) throw ValidationError("follower edge " + pair_text(e.agent, e.neighbor) + " names the leader");
    if (!seen.insert(Edge{e.agent, e.neighbor}).second)
      throw ValidationError("duplicate edge declaration " + pair_text(e.agent, e.neighbor));
  }

  std::map<Edge, std::vector<Edge>> by_key;
  for (const auto& e : follower_edges) {
    if (e.weight == 0.0) continue;
    Edge key{e.agent, e.neighbor};
    if (symmetry == DelaySymmetry::shared) key = Edge{std::min(e.agent, e.neighbor), std::max(e.agent, e.neighbor)};
    by_key[key].push_back(Edge{e.agent, e.neighbor});
  }
  int p = 0;
  for (const auto& [key, members] : by_key) {
    for (const auto& m : members) index.follower[m] = p;
    ++p;
  }
  index.follower_channels = p;

  std::set<int> pinned;
  for (const auto& pin : pins) {
    if (!(pin.weight >= 0.0) || !std::isfinite(pin.weight))
      throw ValidationError("pin on agent " + std::to_string(pin.agent + 1) + " has a negative or non-finite weight");
    if (pin.agent < 0) throw ValidationError("pin names an invalid agent");
    if (pin.weight == 0.0) continue;
    if (!pinned.insert(pin.agent).second)
      throw ValidationError("duplicate edge declaration " + pair_text(pin.agent, kLeader));
  }
  int l = 0;
  for (int agent : pinned) index.pin[agent] = l++;
  index.pin_channels = l;
  return index;
}

DirectedTopology::DirectedTopology(Matrix adjacency, Vector pinning, DelaySymmetry symmetry)
    : adjacency_(std::move(adjacency)), pinning_(std::move(pinning)), symmetry_(symmetry) {
  const auto n = adjacency_.rows();
  if (n == 0) throw ValidationError("topology needs at least one agent");
  if (adjacency_.cols() != n) throw ValidationError("adjacency matrix must be square");
  if (pinning_.size() != n) throw ValidationError("pinning vector length must equal the number of agents");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw ValidationError("adjacency diagonal must be zero (self-loop at agent " + std::to_string(i + 1) + ")");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!std::isfinite(w) || w < 0.0) throw ValidationError("adjacency entries must be finite and nonnegative");
      if (w != 0.0) edges_.push_back({static_cast<int>(i), static_cast<int>(j), w});
    }
    const double w0 = pinning_(i);
    if (!std::isfinite(w0) || w0 < 0.0) throw ValidationError("pinning weights must be finite and nonnegative");
    if (w0 != 0.0) pins_.push_back({static_cast<int>(i), w0});
  }
  index_ = build_delay_index(edges_, pins_, symmetry_);
}

double DirectedTopology::weight(int agent, int neighbor) const {
  if (neighbor == kLeader) return pinning_(agent);
  return adjacency_(agent, neighbor);
}

std::vector<int> DirectedTopology::pinned_agents() const {
  std::vector<int> out;
  for (const auto& p : pins_) out.push_back(p.agent);
  return out;
}

int DirectedTopology::follower_channel(const Edge& e) const {
  auto it = index_.follower.find(e);
  if (it == index_.follower.end()) throw ValidationError("no follower edge " + pair_text(e.agent, e.neighbor));
  return it->second;
}

int DirectedTopology::pin_channel(int agent) const {
  auto it = index_.pin.find(agent);
  if (it == index_.pin.end()) throw ValidationError("agent " + std::to_string(agent + 1) + " is not pinned");
  return it->second;
}

std::vector<Edge> DirectedTopology::channel_edges(int p) const {
  std::vector<Edge> out;
  for (const auto& [edge, channel] : index_.follower)
    if (channel == p) out.push_back(edge);
  return out;
}

bool leader_globally_reachable(const DirectedTopology& topology) {
  const int n = topology.agents();
  std::vector<bool> reached(static_cast<size_t>(n), false);
  std::queue<int> frontier;
  for (const auto& pin : topology.pins()) {
    reached[static_cast<size_t>(pin.agent)] = true;
    frontier.push(pin.agent);
  }
  // out-neighbours in the information-flow sense: j -> i when alpha_ij != 0
  std::vector<std::vector<int>> receivers(static_cast<size_t>(n));
  for (const auto& e : topology.follower_edges()) receivers[static_cast<size_t>(e.neighbor)].push_back(e.agent);
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i : receivers[static_cast<size_t>(j)]) {
      if (!reached[static_cast<size_t>(i)]) {
        reached[static_cast<size_t>(i)] = true;
        frontier.push(i);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool r) { return r; });
}

std::string to_string(DelaySymmetry s) { return s == DelaySymmetry::shared ? "shared" : "per_edge"; }

DelaySymmetry delay_symmetry_from_string(const std::string& s) {
  if (s == "shared") return DelaySymmetry::shared;
  if (s == "per_edge") return DelaySymmetry::per_edge;
  throw ValidationError("unknown delay symmetry '" + s + "' (expected shared or per_edge)");
}

}  // namespace lfc
