#include "lfc/protocol.hpp"

#include <cmath>

#include "lfc/error.hpp"

namespace lfc {

namespace {

std::string link_name(const Edge& e) {
  return "k_" + std::to_string(e.agent + 1) + (e.neighbor == kLeader ? std::string("0") : std::to_string(e.neighbor + 1));
}

void check_vector(const RowVector& k, int order, const std::string& name) {
  if (k.size() != order) throw ValidationError("gain " + name + " has length " + std::to_string(k.size()) + ", expected " + std::to_string(order));
  for (Eigen::Index c = 0; c < k.size(); ++c)
    if (!std::isfinite(k(c))) throw ValidationError("gain " + name + " has a non-finite entry");
}

}  // namespace

ControllerState ControllerState::initial(std::span<const Vector> agent_states) {
  ControllerState s;
  const auto n = static_cast<Eigen::Index>(agent_states.size());
  s.z.resize(n);
  s.upsilon = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) s.z(i) = -agent_states[static_cast<size_t>(i)].sum();
  return s;
}

void validate_gains(const GainSet& gains, const DirectedTopology& topology, int order) {
  for (const auto& e : topology.follower_edges()) {
    const Edge key{e.agent, e.neighbor};
    auto it = gains.follower.find(key);
    if (it == gains.follower.end()) throw ValidationError("missing gain " + link_name(key) + " for an existing edge");
    check_vector(it->second, order, link_name(key));
  }
  for (const auto& [edge, k] : gains.follower)
    if (edge.agent < 0 || edge.agent >= topology.agents() || edge.neighbor < 0 || edge.neighbor >= topology.agents() ||
        topology.weight(edge.agent, edge.neighbor) == 0.0)
      throw ValidationError("gain " + link_name(edge) + " given for an edge that does not exist");
  for (const auto& pin : topology.pins()) {
    auto it = gains.pin.find(pin.agent);
    if (it == gains.pin.end()) throw ValidationError("missing gain " + link_name({pin.agent, kLeader}) + " for a pinned agent");
    check_vector(it->second, order, link_name({pin.agent, kLeader}));
  }
  for (const auto& [agent, k] : gains.pin)
    if (agent < 0 || agent >= topology.agents() || !topology.is_pinned(agent))
      throw ValidationError("gain " + link_name({agent, kLeader}) + " given for an agent that is not pinned");
  if (!(gains.rho >= 0.0) || !std::isfinite(gains.rho)) throw ValidationError("switching gain rho must be finite and nonnegative");
  if (!(gains.t_filter > 0.0) || !std::isfinite(gains.t_filter)) throw ValidationError("filter time constant must be positive");
}

bool gains_strictly_positive(const GainSet& gains) {
  for (const auto& [e, k] : gains.follower)
    if (!(k.array() > 0.0).all()) return false;
  for (const auto& [i, k] : gains.pin)
    if (!(k.array() > 0.0).all()) return false;
  return true;
}

Vector linear_consensus_term(const GainSet& gains, const DirectedTopology& topology, std::span<const LinkSample> samples) {
  std::map<Edge, const LinkSample*> by_link;
  for (const auto& s : samples) by_link[s.link] = &s;

  Vector out = Vector::Zero(topology.agents());
  auto accumulate = [&](const Edge& link, double weight, const RowVector& k) {
    auto it = by_link.find(link);
    if (it == by_link.end()) throw ValidationError("missing delayed sample for link " + link_name(link));
    const LinkSample& s = *it->second;
    if (s.agent_state.size() != k.size() || s.neighbor_state.size() != k.size())
      throw ValidationError("delayed sample for link " + link_name(link) + " has the wrong dimension");
    out(link.agent) -= weight * k.dot(s.agent_state - s.neighbor_state);
  };
  for (const auto& e : topology.follower_edges()) {
    const Edge key{e.agent, e.neighbor};
    auto k = gains.follower.find(key);
    if (k == gains.follower.end()) throw ValidationError("missing gain " + link_name(key));
    accumulate(key, e.weight, k->second);
  }
  for (const auto& pin : topology.pins()) {
    auto k = gains.pin.find(pin.agent);
    if (k == gains.pin.end()) throw ValidationError("missing gain " + link_name({pin.agent, kLeader}));
    accumulate(Edge{pin.agent, kLeader}, pin.weight, k->second);
  }
  return out;
}

double z_rhs(const CompanionPlant& plant, SlidingSign convention, const Vector& x, double linear_term) {
  if (x.size() != plant.order()) throw ValidationError("agent state dimension does not match plant order");
  const double plant_term = (plant.A() * x).sum();
  // 1'B sum(alpha k dx) = -b * linear_term
  const double coupling = -plant.b_gain() * linear_term;
  return convention == SlidingSign::additive ? plant_term + coupling : -plant_term + coupling;
}

double control_discontinuous(const GainSet& gains, double s, double linear_term) {
  return linear_term - gains.rho * sign0(s);
}

SmoothedControl control_smoothed(const GainSet& gains, double s, double upsilon, double linear_term) {
  if (!(gains.t_filter > 0.0)) throw ValidationError("filter time constant must be positive");
  const double target = gains.filter_scaling == FilterScaling::rho_input ? gains.rho * sign0(s) : sign0(s);
  return {linear_term - gains.rho * upsilon, (target - upsilon) / gains.t_filter};
}

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::linear_only: return "linear_only";
    case ProtocolKind::discontinuous: return "discontinuous";
    case ProtocolKind::smoothed: return "smoothed";
  }
  return "linear_only";
}

std::string to_string(FilterScaling s) { return s == FilterScaling::rho_input ? "rho_input" : "consistent"; }
std::string to_string(SlidingSign s) { return s == SlidingSign::additive ? "additive" : "consistent"; }

ProtocolKind protocol_kind_from_string(const std::string& s) {
  if (s == "linear_only") return ProtocolKind::linear_only;
  if (s == "discontinuous") return ProtocolKind::discontinuous;
  if (s == "smoothed") return ProtocolKind::smoothed;
  throw ValidationError("unknown protocol kind '" + s + "' (expected linear_only, discontinuous or smoothed)");
}

FilterScaling filter_scaling_from_string(const std::string& s) {
  if (s == "consistent") return FilterScaling::consistent;
  if (s == "rho_input") return FilterScaling::rho_input;
  throw ValidationError("unknown filter scaling '" + s + "' (expected consistent or rho_input)");
}

SlidingSign sliding_sign_from_string(const std::string& s) {
  if (s == "consistent") return SlidingSign::consistent;
  if (s == "additive") return SlidingSign::additive;
  throw ValidationError("unknown sliding sign convention '" + s + "' (expected consistent or additive)");
}

}  // namespace lfc
