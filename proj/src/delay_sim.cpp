#include "lfc/delay_sim.hpp"

#include <algorithm>
#include <cmath>

#include "lfc/dde.hpp"
#include "lfc/error.hpp"
#include "lfc/random.hpp"

namespace lfc {

DelayProfile::DelayProfile(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size()) throw ValidationError("delay profile needs matching, nonempty knot lists");
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1])) throw ValidationError("delay profile knot times must increase strictly");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("delay values must be finite and nonnegative");
}

DelayProfile DelayProfile::constant(double value) { return DelayProfile({0.0}, {value}); }

DelayProfile DelayProfile::generate(std::uint64_t seed, double tau_max, double slope_bound, double interval, double horizon) {
  if (!(tau_max > 0.0)) throw ValidationError("delay bound tau_max must be positive");
  if (!(slope_bound >= 0.0 && slope_bound <= 1.0)) throw ValidationError("delay slope bound must lie in [0, 1]");
  if (!(interval > 0.0)) throw ValidationError("delay resample interval must be positive");
  if (!(horizon >= 0.0)) throw ValidationError("horizon must be nonnegative");

  Rng rng(seed);
  const double top = tau_max - 1e-6 * tau_max;
  const auto knots = static_cast<std::size_t>(std::ceil(horizon / interval)) + 2;
  std::vector<double> times(knots), values(knots);
  double tau = rng.uniform(0.0, top);
  for (std::size_t k = 0; k < knots; ++k) {
    times[k] = static_cast<double>(k) * interval;
    values[k] = tau;
    const auto level = static_cast<double>(rng.below(kSlopeLevels));
    const double slope = slope_bound * (-1.0 + 2.0 * level / (kSlopeLevels - 1));
    tau = std::clamp(tau + slope * interval, 0.0, top);
  }
  return DelayProfile(std::move(times), std::move(values));
}

double DelayProfile::value(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double DelayProfile::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double DelayProfile::max_abs_slope() const {
  double m = 0.0;
  for (std::size_t k = 1; k < times_.size(); ++k)
    m = std::max(m, std::abs(values_[k] - values_[k - 1]) / (times_[k] - times_[k - 1]));
  return m;
}

double DelayProfiles::max_delay() const {
  double m = 0.0;
  for (const auto& p : pin) m = std::max(m, p.max_value());
  for (const auto& p : follower) m = std::max(m, p.max_value());
  return m;
}

bool DelayProfiles::respects(double tau_max, double slope_bound) const {
  auto ok = [&](const DelayProfile& p) { return p.max_value() < tau_max && p.max_abs_slope() <= slope_bound * (1.0 + 1e-12); };
  return std::all_of(pin.begin(), pin.end(), ok) && std::all_of(follower.begin(), follower.end(), ok);
}

DelayProfiles generate_delay_profiles(const DirectedTopology& topology, const DelaySettings& s, double horizon) {
  DelayProfiles out;
  std::uint64_t stream = 0;
  for (int l = 0; l < topology.pin_channels(); ++l)
    out.pin.push_back(DelayProfile::generate(mix_seed(s.seed, stream++), s.tau_max, s.slope_bound, s.resample_interval, horizon));
  for (int p = 0; p < topology.follower_channels(); ++p)
    out.follower.push_back(DelayProfile::generate(mix_seed(s.seed, stream++), s.tau_max, s.slope_bound, s.resample_interval, horizon));
  return out;
}

DelayProfiles constant_delay_profiles(const DirectedTopology& topology, double value) {
  DelayProfiles out;
  out.pin.assign(static_cast<std::size_t>(topology.pin_channels()), DelayProfile::constant(value));
  out.follower.assign(static_cast<std::size_t>(topology.follower_channels()), DelayProfile::constant(value));
  return out;
}

DelayProfiles zero_delay_profiles(const DirectedTopology& topology) { return constant_delay_profiles(topology, 0.0); }

Vector SimTrace::stacked_error(std::size_t k) const {
  Vector e(agents * order);
  for (int i = 0; i < agents; ++i) e.segment(i * order, order) = x[static_cast<std::size_t>(i)][k] - leader[k];
  return e;
}

double SimTrace::max_final_error() const {
  if (time.empty()) return 0.0;
  double m = 0.0;
  for (const auto& e : error) m = std::max(m, e.back());
  return m;
}

namespace {

// Per-link data compiled once from the topology and the gains.
struct CompiledLink {
  int agent;
  int neighbor;  // kLeader for pins
  RowVector weighted_gain;  // alpha * k
  bool pin;
  int channel;
};

}  // namespace

SimTrace integrate(const SimulationSetup& setup) {
  if (!setup.plant || !setup.topology || !setup.gains || !setup.profiles || !setup.disturbance)
    throw ValidationError("simulation setup is incomplete");
  const CompanionPlant& plant = *setup.plant;
  const DirectedTopology& topo = *setup.topology;
  const GainSet& gains = *setup.gains;
  const DelayProfiles& profiles = *setup.profiles;
  const DisturbanceModel& disturbance = *setup.disturbance;
  const int n = plant.order();
  const int agents = topo.agents();

  validate_gains(gains, topo, n);
  if (!(setup.step > 0.0)) throw ValidationError("integration step must be positive");
  if (!(setup.horizon >= 0.0)) throw ValidationError("horizon must be nonnegative");
  if (setup.initial.leader.size() != n) throw ValidationError("leader initial state has the wrong dimension");
  if (static_cast<int>(setup.initial.agents.size()) != agents) throw ValidationError("need one initial state per agent");
  for (const auto& x : setup.initial.agents)
    if (x.size() != n) throw ValidationError("agent initial state has the wrong dimension");
  if (static_cast<int>(profiles.pin.size()) != topo.pin_channels() || static_cast<int>(profiles.follower.size()) != topo.follower_channels())
    throw ValidationError("delay profiles do not match the topology's channels");
  if (disturbance.kind() != DisturbanceKind::zero && disturbance.agents() != agents)
    throw ValidationError("disturbance model has the wrong number of agents");

  SimTrace trace;
  trace.agents = agents;
  trace.order = n;
  trace.step = setup.step;
  trace.x.assign(static_cast<std::size_t>(agents), {});
  trace.u.assign(static_cast<std::size_t>(agents), {});
  trace.s.assign(static_cast<std::size_t>(agents), {});
  trace.upsilon.assign(static_cast<std::size_t>(agents), {});
  trace.error.assign(static_cast<std::size_t>(agents), {});

  const double max_delay = profiles.max_delay();
  if (max_delay > 0.0 && setup.step > 0.1 * max_delay)
    trace.warnings.push_back("step exceeds a tenth of the largest delay; delays are poorly resolved");
  if (setup.protocol == ProtocolKind::smoothed && gains.t_filter < 5.0 * setup.step)
    trace.warnings.push_back("filter time constant is below five integration steps");
  if (setup.horizon == 0.0) return trace;

  std::vector<CompiledLink> links;
  for (const auto& e : topo.follower_edges())
    links.push_back({e.agent, e.neighbor, e.weight * gains.follower.at(Edge{e.agent, e.neighbor}), false,
                     topo.follower_channel(Edge{e.agent, e.neighbor})});
  for (const auto& p : topo.pins())
    links.push_back({p.agent, kLeader, p.weight * gains.pin.at(p.agent), true, topo.pin_channel(p.agent)});

  // y = (x_1, ..., x_N, x_0, z, v)
  const Eigen::Index leader_at = static_cast<Eigen::Index>(agents) * n;
  const Eigen::Index z_at = leader_at + n;
  const Eigen::Index v_at = z_at + agents;
  const Eigen::Index dim = v_at + agents;

  Vector y0(dim);
  const ControllerState c0 = ControllerState::initial(setup.initial.agents);
  for (int i = 0; i < agents; ++i) y0.segment(i * n, n) = setup.initial.agents[static_cast<std::size_t>(i)];
  y0.segment(leader_at, n) = setup.initial.leader;
  y0.segment(z_at, agents) = c0.z;
  y0.segment(v_at, agents) = c0.upsilon;

  const std::size_t pin_channels = profiles.pin.size();
  std::vector<Vector> channel_state(pin_channels + profiles.follower.size(), Vector(dim));
  Vector linear(agents), control(agents), v_rate(agents);
  const Vector& B = plant.B();
  const Matrix& A = plant.A();


  // linear protocol term and controls at (t, y); fills `linear`, `control`, `v_rate`
  auto evaluate_protocol = [&](double t, const Vector& y, const DelayedStateView& delayed) {
    for (std::size_t c = 0; c < pin_channels; ++c)
      delayed.read(t - profiles.pin[c].value(t), channel_state[c]);
    for (std::size_t c = 0; c < profiles.follower.size(); ++c)
      delayed.read(t - profiles.follower[c].value(t), channel_state[pin_channels + c]);
    linear.setZero();
    for (const auto& l : links) {
      const Vector& yd = channel_state[l.pin ? static_cast<std::size_t>(l.channel) : pin_channels + static_cast<std::size_t>(l.channel)];
      const Eigen::Index other = l.pin ? leader_at : static_cast<Eigen::Index>(l.neighbor) * n;
      linear(l.agent) -= l.weighted_gain.dot(yd.segment(static_cast<Eigen::Index>(l.agent) * n, n) - yd.segment(other, n));
    }
    for (int i = 0; i < agents; ++i) {
      const double si = sliding_value(y.segment(i * n, n), y(z_at + i));
      switch (setup.protocol) {
        case ProtocolKind::linear_only:
          control(i) = linear(i);
          v_rate(i) = 0.0;
          break;
        case ProtocolKind::discontinuous:
          control(i) = control_discontinuous(gains, si, linear(i));
          v_rate(i) = 0.0;
          break;
        case ProtocolKind::smoothed: {
          const SmoothedControl sc = control_smoothed(gains, si, y(v_at + i), linear(i));
          control(i) = sc.u;
          v_rate(i) = sc.upsilon_rate;
          break;
        }
      }
    }
  };

  DdeRhs rhs = [&](double t, const Vector& y, const DelayedStateView& delayed, Vector& dy) {
    evaluate_protocol(t, y, delayed);
    for (int i = 0; i < agents; ++i) {
      const auto xi = y.segment(i * n, n);
      const double w = disturbance.value(i, t);
      dy.segment(i * n, n).noalias() = A * xi;
      dy(i * n + n - 1) += B(n - 1) * (control(i) + w);
      dy(z_at + i) = z_rhs(plant, gains.sliding_sign, xi, linear(i));
      dy(v_at + i) = v_rate(i);
    }
    dy.segment(leader_at, n).noalias() = A * y.segment(leader_at, n);
  };

  const auto steps = static_cast<int>(std::llround(std::ceil(setup.horizon / setup.step - 1e-9)));
  for (auto* series : {&trace.u, &trace.s, &trace.upsilon, &trace.error})
    for (auto& row : *series) row.reserve(static_cast<std::size_t>(steps) + 1);

  DdeObserver observer = [&](int, double t, const Vector& y, const DelayedStateView& delayed) {
    evaluate_protocol(t, y, delayed);
    trace.time.push_back(t);
    const Vector x0 = y.segment(leader_at, n);
    trace.leader.push_back(x0);
    for (int i = 0; i < agents; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const Vector xi = y.segment(i * n, n);
      trace.x[idx].push_back(xi);
      trace.u[idx].push_back(control(i));
      trace.s[idx].push_back(sliding_value(xi, y(z_at + i)));
      trace.upsilon[idx].push_back(y(v_at + i));
      trace.error[idx].push_back((xi - x0).norm());
    }
  };

  DdeOptions options;
  options.step = setup.step;
  options.steps = steps;
  options.max_delay = max_delay;
  integrate_dde(rhs, y0, options, observer);
  return trace;
}

double control_total_variation(const SimTrace& trace, double t_from, double t_to) {
  double tv = 0.0;
  for (const auto& u : trace.u)
    for (std::size_t k = 1; k < trace.time.size(); ++k)
      if (trace.time[k - 1] >= t_from - 1e-12 && trace.time[k] <= t_to + 1e-12) tv += std::abs(u[k] - u[k - 1]);
  return tv;
}

}  // namespace lfc
