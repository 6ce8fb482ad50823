#include <doctest.h>

#include <set>

#include "lfc/error.hpp"
#include "lfc/graph_topology.hpp"
#include "lfc/random.hpp"

using namespace lfc;

namespace {

Matrix benchmark_adjacency() {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 2) = a(1, 3) = a(2, 3) = a(3, 0) = a(3, 1) = 1.0;
  return a;
}

Vector pin_first(int n) {
  Vector p = Vector::Zero(n);
  p(0) = 1.0;
  return p;
}

// reachability from the leader by repeated relaxation
bool reachable_oracle(const Matrix& adj, const Vector& pins) {
  const int n = static_cast<int>(adj.rows());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) seen[static_cast<std::size_t>(i)] = pins(i) != 0.0;
  for (int round = 0; round < n; ++round)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (adj(i, j) != 0.0 && seen[static_cast<std::size_t>(j)]) seen[static_cast<std::size_t>(i)] = true;
  for (bool s : seen)
    if (!s) return false;
  return true;
}

}  // namespace

TEST_CASE("benchmark topology: channel counts under both symmetry modes") {
  const DirectedTopology shared(benchmark_adjacency(), pin_first(4), DelaySymmetry::shared);
  CHECK(shared.follower_edges().size() == 5);
  CHECK(shared.follower_channels() == 4);  // (2,4) and (4,2) share a channel
  CHECK(shared.pin_channels() == 1);
  CHECK(shared.follower_channel(Edge{1, 3}) == shared.follower_channel(Edge{3, 1}));
  CHECK(shared.channel_edges(shared.follower_channel(Edge{1, 3})).size() == 2);

  const DirectedTopology per_edge(benchmark_adjacency(), pin_first(4), DelaySymmetry::per_edge);
  CHECK(per_edge.follower_channels() == 5);
  std::set<int> ids;
  for (const auto& e : per_edge.follower_edges()) ids.insert(per_edge.follower_channel(Edge{e.agent, e.neighbor}));
  CHECK(ids.size() == 5);
}

TEST_CASE("empty follower set and complete bidirectional graph") {
  const DirectedTopology lone(Matrix::Zero(1, 1), pin_first(1));
  CHECK(lone.follower_channels() == 0);
  CHECK(lone.pin_channels() == 1);

  Matrix full = Matrix::Ones(3, 3);
  full.diagonal().setZero();
  const DirectedTopology tri(full, pin_first(3));
  CHECK(tri.follower_edges().size() == 6);
  CHECK(tri.follower_channels() == 3);
}

TEST_CASE("invalid topologies are rejected") {
  Matrix neg = benchmark_adjacency();
  neg(0, 2) = -1.0;
  CHECK_THROWS_AS(DirectedTopology(neg, pin_first(4)), ValidationError);
  Matrix loop = benchmark_adjacency();
  loop(1, 1) = 1.0;
  CHECK_THROWS_AS(DirectedTopology(loop, pin_first(4)), ValidationError);
  CHECK_THROWS_AS(DirectedTopology(Matrix::Zero(2, 3), pin_first(2)), ValidationError);
  Vector bad_pin = pin_first(4);
  bad_pin(2) = -0.5;
  CHECK_THROWS_AS(DirectedTopology(benchmark_adjacency(), bad_pin), ValidationError);

  const std::vector<WeightedEdge> dup{{0, 1, 1.0}, {0, 1, 2.0}};
  CHECK_THROWS_WITH_AS(build_delay_index(dup, {}), doctest::Contains("duplicate edge declaration (1,2)"), ValidationError);
}

TEST_CASE("delay index is stable under permutation of the edge list") {
  std::vector<WeightedEdge> edges{{0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}, {3, 1, 1.0}};
  const std::vector<PinLink> pins{{0, 1.0}};
  const DelayIndex ref = build_delay_index(edges, pins);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t k = edges.size(); k > 1; --k) std::swap(edges[k - 1], edges[rng.below(k)]);
    const DelayIndex again = build_delay_index(edges, pins);
    CHECK(again.follower == ref.follower);
    CHECK(again.pin == ref.pin);
  }
}

TEST_CASE("leader reachability") {
  CHECK(leader_globally_reachable(DirectedTopology(benchmark_adjacency(), pin_first(4))));
  CHECK_FALSE(leader_globally_reachable(DirectedTopology(benchmark_adjacency(), Vector::Zero(4))));
  CHECK_FALSE(leader_globally_reachable(DirectedTopology(Matrix::Zero(2, 2), pin_first(2))));
}

TEST_CASE("reachability agrees with a relaxation oracle on all small random graphs") {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    Matrix adj = Matrix::Zero(n, n);
    Vector pins = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.3) pins(i) = 1.0;
      for (int j = 0; j < n; ++j)
        if (i != j && rng.uniform() < 0.35) adj(i, j) = rng.uniform(0.1, 2.0);
    }
    const DirectedTopology topo(adj, pins);
    CHECK(leader_globally_reachable(topo) == reachable_oracle(adj, pins));
  }
}

TEST_CASE("symmetry names round-trip") {
  CHECK(delay_symmetry_from_string(to_string(DelaySymmetry::per_edge)) == DelaySymmetry::per_edge);
  CHECK_THROWS_AS(delay_symmetry_from_string("mirrored"), ValidationError);
}
