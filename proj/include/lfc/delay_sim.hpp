#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfc/graph_topology.hpp"
#include "lfc/plant.hpp"
#include "lfc/protocol.hpp"

namespace lfc {

/// Piecewise-linear delay tau(t) through knots (t_k, tau_k); held constant
/// outside the knot range.
class DelayProfile {
 public:
  DelayProfile() = default;
  DelayProfile(std::vector<double> times, std::vector<double> values);

  static DelayProfile constant(double value);

  /// Knots every `interval` seconds on [0, horizon]; each knot-to-knot slope
  /// is drawn uniformly from {-d, -d + d/10, ..., d} and the knot values are
  /// clipped to [0, tau_max - 1e-6 tau_max]. d = 0 gives a constant delay.
  static DelayProfile generate(std::uint64_t seed, double tau_max, double slope_bound, double interval, double horizon);

  double value(double t) const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double max_value() const;
  double max_abs_slope() const;

 private:
  std::vector<double> times_{0.0};
  std::vector<double> values_{0.0};
};

inline constexpr int kSlopeLevels = 21;

/// One profile per delay channel, indexed like DirectedTopology's channels.
struct DelayProfiles {
  std::vector<DelayProfile> pin;
  std::vector<DelayProfile> follower;

  double max_delay() const;
  /// Checks 0 <= tau < tau_max and |slope| <= slope_bound on every channel.
  bool respects(double tau_max, double slope_bound) const;
};

struct DelaySettings {
  double tau_max = 0.8;
  double slope_bound = 0.99;
  double resample_interval = 0.05;
  std::uint64_t seed = 1;
};

DelayProfiles generate_delay_profiles(const DirectedTopology& topology, const DelaySettings& settings, double horizon);
DelayProfiles zero_delay_profiles(const DirectedTopology& topology);
DelayProfiles constant_delay_profiles(const DirectedTopology& topology, double value);

struct InitialStates {
  Vector leader;
  std::vector<Vector> agents;
};

struct SimulationSetup {
  const CompanionPlant* plant = nullptr;
  const DirectedTopology* topology = nullptr;
  const GainSet* gains = nullptr;
  const DelayProfiles* profiles = nullptr;
  const DisturbanceModel* disturbance = nullptr;
  InitialStates initial;
  ProtocolKind protocol = ProtocolKind::linear_only;
  double step = 1e-3;
  double horizon = 40.0;
};

/// Uniform-grid record of one closed-loop run.
struct SimTrace {
  int agents = 0;
  int order = 0;
  double step = 0.0;
  std::vector<double> time;
  std::vector<std::vector<Vector>> x;  // [agent][k]
  std::vector<Vector> leader;          // [k]
  std::vector<std::vector<double>> u;  // [agent][k]
  std::vector<std::vector<double>> s;  // [agent][k]
  std::vector<std::vector<double>> upsilon;
  std::vector<std::vector<double>> error;  // ||x_i - x_0||_2
  std::optional<std::vector<double>> lyapunov;  // V(t), when evaluated
  std::vector<std::string> warnings;

  std::size_t samples() const { return time.size(); }
  /// Stacked error e = (x_1 - x_0, ..., x_N - x_0) at sample k.
  Vector stacked_error(std::size_t k) const;
  double max_final_error() const;
};

/// Closed loop of the agents, the leader and the protocol, integrated with
/// the fixed-step Runge-Kutta DDE kernel; delayed arguments are read by
/// linear interpolation. Constant pre-history on [-tau_max, 0].
SimTrace integrate(const SimulationSetup& setup);

/// Sum over agents of the total variation of u_i on [t_from, t_to].
double control_total_variation(const SimTrace& trace, double t_from, double t_to);

}  // namespace lfc
