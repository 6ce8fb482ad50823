#pragma once

#include <cmath>

#include "lfc/linalg.hpp"
#include "lfc/random.hpp"

namespace test {

inline lfc::Matrix random_matrix(lfc::Rng& rng, int r, int c) {
  lfc::Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

inline lfc::Matrix random_symmetric(lfc::Rng& rng, int n) {
  const lfc::Matrix g = random_matrix(rng, n, n);
  return 0.5 * (g + g.transpose());
}

inline lfc::Matrix random_spd(lfc::Rng& rng, int n, double shift = 0.1) {
  const lfc::Matrix g = random_matrix(rng, n, n);
  return g * g.transpose() + shift * lfc::Matrix::Identity(n, n);
}

}  // namespace test

#include "lfc/graph_topology.hpp"
#include "lfc/plant.hpp"
#include "lfc/protocol.hpp"

namespace test {

// N in {2, 3}, n = 2, agent 1 pinned, random spanning tree plus extra edges
struct SmallCase {
  lfc::CompanionPlant plant;
  lfc::DirectedTopology topology;
  lfc::GainSet gains;
};

inline SmallCase small_case(lfc::Rng& rng) {
  using namespace lfc;
  const int agents = 2 + static_cast<int>(rng.below(2));
  const int n = 2;
  Matrix adj = Matrix::Zero(agents, agents);
  for (int i = 1; i < agents; ++i) adj(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(i)))) = 1.0;
  for (int i = 0; i < agents; ++i)
    for (int j = 0; j < agents; ++j)
      if (i != j && adj(i, j) == 0.0 && rng.uniform() < 0.3) adj(i, j) = rng.uniform(0.5, 1.5);
  Vector pin = Vector::Zero(agents);
  pin(0) = 1.0;
  DirectedTopology topo(adj, pin);
  GainSet g;
  g.pin[0] = RowVector::NullaryExpr(n, [&] { return rng.uniform(0.05, 2.0); });
  for (const auto& e : topo.follower_edges())
    g.follower[Edge{e.agent, e.neighbor}] = RowVector::NullaryExpr(n, [&] { return rng.uniform(0.05, 1.0); });
  return {CompanionPlant({rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)}, 1.0), std::move(topo), std::move(g)};
}

}  // namespace test
