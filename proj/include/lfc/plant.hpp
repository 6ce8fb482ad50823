#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lfc/linalg.hpp"

namespace lfc {

/// Companion-form agent: x' = A x + B (u + w), with
/// A = [0 1 0 ...; ...; -a_1 ... -a_n] and B = (0, ..., 0, b)'.
class CompanionPlant {
 public:
  CompanionPlant(std::vector<double> a_coeffs, double b_gain);

  int order() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& a_coeffs() const { return a_; }
  double b_gain() const { return b_; }
  const Matrix& A() const { return A_; }
  const Vector& B() const { return B_; }

 private:
  std::vector<double> a_;
  double b_;
  Matrix A_;
  Vector B_;
};

Vector agent_rhs(const CompanionPlant& plant, const Vector& x, double u, double w);
Vector leader_rhs(const CompanionPlant& plant, const Vector& x0);

enum class DisturbanceKind { zero, biased_sinusoid, samples };

/// w(t) = offset + amplitude * sin(2 pi frequency t)
struct SinusoidCoefficients {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
};

/// Coefficient ranges for randomly drawn biased sinusoids.
struct SinusoidRanges {
  std::array<double, 2> offset{-3.0, 3.0};
  std::array<double, 2> amplitude{1.0, 6.0};
  std::array<double, 2> frequency{1.0, 3.0};

  /// Worst case of |offset| + amplitude over the ranges.
  double bound() const;
};

/// Per-agent bounded exogenous perturbation.
class DisturbanceModel {
 public:
  static DisturbanceModel zero(int agents);
  static DisturbanceModel biased_sinusoid(std::vector<SinusoidCoefficients> coefficients);
  /// Draws one coefficient triple per agent, uniformly inside `ranges`.
  static DisturbanceModel draw_biased_sinusoid(int agents, const SinusoidRanges& ranges, std::uint64_t seed);
  /// Zero-order-hold playback of per-agent samples taken every `interval`
  /// seconds; `declared_bound` must dominate every sample.
  static DisturbanceModel sampled(double interval, std::vector<std::vector<double>> samples, double declared_bound);

  DisturbanceKind kind() const { return kind_; }
  int agents() const { return agents_; }
  const std::vector<SinusoidCoefficients>& coefficients() const { return coefficients_; }
  double sample_interval() const { return interval_; }
  const std::vector<std::vector<double>>& samples() const { return samples_; }

  double value(int agent, double t) const;
  /// Gamma = max_i Gamma_i.
  double bound() const { return bound_; }

 private:
  DisturbanceKind kind_ = DisturbanceKind::zero;
  int agents_ = 0;
  std::vector<SinusoidCoefficients> coefficients_;
  double interval_ = 0.0;
  std::vector<std::vector<double>> samples_;
  double bound_ = 0.0;
};

double disturbance_value(const DisturbanceModel& model, int agent, double t);
double disturbance_bound(const DisturbanceModel& model);

std::string to_string(DisturbanceKind kind);

}  // namespace lfc
