#include "lfc/dde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

HistoryBuffer::HistoryBuffer(Eigen::Index dimension, double step, double span) : dim_(dimension), step_(step) {
  if (!(step > 0.0)) throw std::invalid_argument("HistoryBuffer: step must be positive");
  if (!(span >= 0.0)) throw std::invalid_argument("HistoryBuffer: span must be nonnegative");
  const auto slots = static_cast<std::size_t>(std::ceil(span / step)) + 3;
  ring_.assign(slots, Vector::Zero(dimension));
}

void HistoryBuffer::push(double t, const Vector& y) {
  if (y.size() != dim_) throw std::invalid_argument("HistoryBuffer: sample dimension mismatch");
  if (count_ == 0) t0_ = t;
  ring_[count_ % ring_.size()] = y;
  ++count_;
}

double HistoryBuffer::latest_time() const { return t0_ + static_cast<double>(count_ - 1) * step_; }

void HistoryBuffer::read(double t, Eigen::Ref<Vector> out) const {
  if (count_ == 0) throw std::logic_error("HistoryBuffer: read before any sample");
  if (t <= t0_) {
    out = sample(0);
    return;
  }
  const double u = (t - t0_) / step_;
  auto k = static_cast<std::size_t>(std::floor(u));
  if (k >= count_ - 1) {
    // at (or, by rounding, a hair past) the latest sample
    if (u > static_cast<double>(count_ - 1) + 1e-9)
      throw std::logic_error("HistoryBuffer: read past the latest sample");
    out = sample(count_ - 1);
    return;
  }
  if (count_ > ring_.size() && k < count_ - ring_.size())
    throw std::logic_error("HistoryBuffer: requested time is older than the retained window");
  const double w = u - static_cast<double>(k);
  out = (1.0 - w) * sample(k) + w * sample(k + 1);
}

Vector HistoryBuffer::at(double t) const {
  Vector out(dim_);
  read(t, out);
  return out;
}

void DelayedStateView::read(double t, Eigen::Ref<Vector> out) const {
  if (t <= t_step_) {
    history_.read(t, out);
    return;
  }
  const double span = t_stage_ - t_step_;
  const double w = span > 0.0 ? std::min((t - t_step_) / span, 1.0) : 1.0;
  out = (1.0 - w) * y_step_ + w * y_stage_;
}

Vector DelayedStateView::operator()(double t) const {
  Vector out(y_step_.size());
  read(t, out);
  return out;
}

void integrate_dde(const DdeRhs& rhs, const Vector& y0, const DdeOptions& options, const DdeObserver& observer) {
  const double h = options.step;
  if (!(h > 0.0)) throw ValidationError("integration step must be positive");
  if (options.steps < 0) throw ValidationError("number of steps must be nonnegative");

  const Eigen::Index dim = y0.size();
  HistoryBuffer history(dim, h, options.max_delay + h);
  Vector y = y0;
  Vector k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
  history.push(0.0, y);

  if (observer) observer(0, 0.0, y, DelayedStateView(history, 0.0, y, 0.0, y));

  for (int n = 0; n < options.steps; ++n) {
    const double t = static_cast<double>(n) * h;
    rhs(t, y, DelayedStateView(history, t, y, t, y), k1);
    stage = y + 0.5 * h * k1;
    rhs(t + 0.5 * h, stage, DelayedStateView(history, t, y, t + 0.5 * h, stage), k2);
    stage = y + 0.5 * h * k2;
    rhs(t + 0.5 * h, stage, DelayedStateView(history, t, y, t + 0.5 * h, stage), k3);
    stage = y + h * k3;
    rhs(t + h, stage, DelayedStateView(history, t, y, t + h, stage), k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = static_cast<double>(n + 1) * h;
    if (!y.allFinite()) throw SimulationError("non-finite state at t = " + std::to_string(t_next), t_next);
    history.push(t_next, y);
    if (observer) observer(n + 1, t_next, y, DelayedStateView(history, t_next, y, t_next, y));
  }
}

}  // namespace lfc
