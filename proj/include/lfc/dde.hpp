#pragma once

#include <functional>
#include <vector>

#include "lfc/linalg.hpp"

namespace lfc {

/// Uniform-step record of past states covering at least [t - span, t].
/// Queries before the first sample return the first sample (constant
/// pre-history); queries inside the window interpolate linearly.
class HistoryBuffer {
 public:
  HistoryBuffer(Eigen::Index dimension, double step, double span);

  /// Appends the sample at t0 + k*step; samples must arrive in order.
  void push(double t, const Vector& y);

  /// Linear interpolation at t (t must not exceed the latest sample).
  void read(double t, Eigen::Ref<Vector> out) const;
  Vector at(double t) const;

  double first_time() const { return t0_; }
  double latest_time() const;
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return ring_.size(); }

 private:
  Eigen::Index dim_;
  double step_;
  double t0_ = 0.0;
  std::size_t count_ = 0;  // samples pushed so far
  std::vector<Vector> ring_;
  const Vector& sample(std::size_t k) const { return ring_[k % ring_.size()]; }
};

/// Delayed-argument accessor handed to the right-hand side at one stage:
/// samples at or before the step start come from the history, later ones
/// are interpolated between the step-start state and the stage state.
class DelayedStateView {
 public:
  DelayedStateView(const HistoryBuffer& history, double t_step, const Vector& y_step, double t_stage, const Vector& y_stage)
      : history_(history), t_step_(t_step), y_step_(y_step), t_stage_(t_stage), y_stage_(y_stage) {}

  void read(double t, Eigen::Ref<Vector> out) const;
  Vector operator()(double t) const;
  double stage_time() const { return t_stage_; }

 private:
  const HistoryBuffer& history_;
  double t_step_;
  const Vector& y_step_;
  double t_stage_;
  const Vector& y_stage_;
};

using DdeRhs = std::function<void(double t, const Vector& y, const DelayedStateView& delayed, Vector& dydt)>;
/// Called for every accepted sample k = 0..steps with the state at t_k.
using DdeObserver = std::function<void(int k, double t, const Vector& y, const DelayedStateView& delayed)>;

struct DdeOptions {
  double step = 1e-3;
  int steps = 0;
  double max_delay = 0.0;  // largest delay the right-hand side will request
};

/// Classic four-stage Runge-Kutta for retarded equations with constant
/// pre-history y(t) = y0 for t <= 0. Throws SimulationError on a non-finite
/// state.
void integrate_dde(const DdeRhs& rhs, const Vector& y0, const DdeOptions& options, const DdeObserver& observer);

}  // namespace lfc
