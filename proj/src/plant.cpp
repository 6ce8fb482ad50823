#include "lfc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lfc/error.hpp"
#include "lfc/random.hpp"

namespace lfc {

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CompanionPlant::CompanionPlant(std::vector<double> a_coeffs, double b_gain) : a_(std::move(a_coeffs)), b_(b_gain) {
  if (a_.empty()) throw ValidationError("plant order must be positive");
  for (double a : a_)
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("plant coefficients a_1..a_n must be positive");
  if (!(b_ > 0.0) || !std::isfinite(b_)) throw ValidationError("plant input gain b must be positive");
  A_ = companion_matrix(a_);
  B_ = Vector::Zero(order());
  B_(order() - 1) = b_;
}

Vector agent_rhs(const CompanionPlant& plant, const Vector& x, double u, double w) {
  if (x.size() != plant.order()) throw ValidationError("agent state dimension does not match plant order");
  return plant.A() * x + plant.B() * (u + w);
}

Vector leader_rhs(const CompanionPlant& plant, const Vector& x0) {
  if (x0.size() != plant.order()) throw ValidationError("leader state dimension does not match plant order");
  return plant.A() * x0;
}

double SinusoidRanges::bound() const {
  return std::max(std::abs(offset[0]), std::abs(offset[1])) + std::max(amplitude[0], amplitude[1]);
}

DisturbanceModel DisturbanceModel::zero(int agents) {
  DisturbanceModel m;
  m.kind_ = DisturbanceKind::zero;
  m.agents_ = agents;
  return m;
}

DisturbanceModel DisturbanceModel::biased_sinusoid(std::vector<SinusoidCoefficients> coefficients) {
  DisturbanceModel m;
  m.kind_ = DisturbanceKind::biased_sinusoid;
  m.agents_ = static_cast<int>(coefficients.size());
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.offset) || !std::isfinite(c.amplitude) || !std::isfinite(c.frequency))
      throw ValidationError("disturbance coefficients must be finite");
    if (c.amplitude < 0.0 || c.frequency < 0.0) throw ValidationError("disturbance amplitude and frequency must be nonnegative");
    m.bound_ = std::max(m.bound_, std::abs(c.offset) + c.amplitude);
  }
  m.coefficients_ = std::move(coefficients);
  return m;
}

DisturbanceModel DisturbanceModel::draw_biased_sinusoid(int agents, const SinusoidRanges& r, std::uint64_t seed) {
  if (r.offset[0] > r.offset[1] || r.amplitude[0] > r.amplitude[1] || r.frequency[0] > r.frequency[1])
    throw ValidationError("disturbance ranges must be ordered [lo, hi]");
  Rng rng(seed);
  std::vector<SinusoidCoefficients> c(static_cast<size_t>(agents));
  for (auto& k : c) {
    k.offset = rng.uniform(r.offset[0], r.offset[1]);
    k.amplitude = rng.uniform(r.amplitude[0], r.amplitude[1]);
    k.frequency = rng.uniform(r.frequency[0], r.frequency[1]);
  }
  return biased_sinusoid(std::move(c));
}

DisturbanceModel DisturbanceModel::sampled(double interval, std::vector<std::vector<double>> samples, double declared_bound) {
  if (!(interval > 0.0)) throw ValidationError("disturbance sample interval must be positive");
  if (!(declared_bound >= 0.0)) throw ValidationError("declared disturbance bound must be nonnegative");
  for (const auto& row : samples) {
    if (row.empty()) throw ValidationError("every agent needs at least one disturbance sample");
    for (double v : row)
      if (!std::isfinite(v) || std::abs(v) > declared_bound)
        throw ValidationError("disturbance sample " + std::to_string(v) + " exceeds the declared bound " + std::to_string(declared_bound));
  }
  DisturbanceModel m;
  m.kind_ = DisturbanceKind::samples;
  m.agents_ = static_cast<int>(samples.size());
  m.interval_ = interval;
  m.samples_ = std::move(samples);
  m.bound_ = declared_bound;
  return m;
}

double DisturbanceModel::value(int agent, double t) const {
  switch (kind_) {
    case DisturbanceKind::zero:
      return 0.0;
    case DisturbanceKind::biased_sinusoid: {
      const auto& c = coefficients_[static_cast<size_t>(agent)];
      return c.offset + c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * t);
    }
    case DisturbanceKind::samples: {
      const auto& row = samples_[static_cast<size_t>(agent)];
      const double k = std::floor(std::max(t, 0.0) / interval_);
      const auto idx = static_cast<size_t>(std::min(k, static_cast<double>(row.size() - 1)));
      return row[idx];
    }
  }
  return 0.0;
}

double disturbance_value(const DisturbanceModel& model, int agent, double t) { return model.value(agent, t); }
double disturbance_bound(const DisturbanceModel& model) { return model.bound(); }

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::zero: return "zero";
    case DisturbanceKind::biased_sinusoid: return "biased_sinusoid";
    case DisturbanceKind::samples: return "samples";
  }
  return "zero";
}

}  // namespace lfc
