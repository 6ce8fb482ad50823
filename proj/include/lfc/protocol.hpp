#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lfc/graph_topology.hpp"
#include "lfc/plant.hpp"

namespace lfc {

enum class ProtocolKind { linear_only, discontinuous, smoothed };

/// How the chattering filter is scaled.
///   consistent: T v' + v = sign(s),     u = lin - rho v
///   rho_input:  T v' + v = rho sign(s), u = lin - rho v
enum class FilterScaling { consistent, rho_input };

/// Sign of the plant term in the integral-state dynamics.
///   consistent: z' = -1'A x + 1'B sum(alpha k dx)   (gives s' = b (w - rho sign s))
///   additive:   z' =  1'(A x + B sum(alpha k dx))
enum class SlidingSign { consistent, additive };

struct GainSet {
  std::map<Edge, RowVector> follower;  // k_ij for every follower edge
  std::map<int, RowVector> pin;        // k_i0 for every pinned agent
  double rho = 0.0;
  double t_filter = 0.01;
  FilterScaling filter_scaling = FilterScaling::consistent;
  SlidingSign sliding_sign = SlidingSign::consistent;
};

/// Integral states z_i and filter states v_i.
struct ControllerState {
  Vector z;
  Vector upsilon;

  /// z_i(0) = -1' x_i(0), v_i(0) = 0.
  static ControllerState initial(std::span<const Vector> agent_states);
};

/// Delayed pair for one link: x_agent(t - tau) and x_neighbor(t - tau)
/// (the leader's state when link.neighbor == kLeader).
struct LinkSample {
  Edge link;
  Vector agent_state;
  Vector neighbor_state;
};

/// sign with sign(0) = 0.
inline double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Throws ValidationError when a gain is missing, extraneous or mis-sized,
/// or when rho / t_filter are out of range.
void validate_gains(const GainSet& gains, const DirectedTopology& topology, int order);

/// Every gain entry strictly positive.
bool gains_strictly_positive(const GainSet& gains);

/// -sum_j alpha_ij k_ij (x_i(t - tau_ij) - x_j(t - tau_ij)), j = 0 included,
/// for every agent. Every incident link of the topology must be sampled.
Vector linear_consensus_term(const GainSet& gains, const DirectedTopology& topology, std::span<const LinkSample> samples);

inline double sliding_value(const Vector& x, double z) { return x.sum() + z; }

/// z_i' given the agent's linear protocol term (the value returned by
/// linear_consensus_term for agent i).
double z_rhs(const CompanionPlant& plant, SlidingSign convention, const Vector& x, double linear_term);

/// u_i = linear_term - rho sign(s_i)
double control_discontinuous(const GainSet& gains, double s, double linear_term);

struct SmoothedControl {
  double u = 0.0;
  double upsilon_rate = 0.0;
};

SmoothedControl control_smoothed(const GainSet& gains, double s, double upsilon, double linear_term);

std::string to_string(ProtocolKind kind);
std::string to_string(FilterScaling s);
std::string to_string(SlidingSign s);
ProtocolKind protocol_kind_from_string(const std::string& s);
FilterScaling filter_scaling_from_string(const std::string& s);
SlidingSign sliding_sign_from_string(const std::string& s);

}  // namespace lfc
