#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lfc/lmi_cert.hpp"

namespace lfc {

struct TuneConfig {
  GainSet initial;
  double lower = 1e-4;   // per-entry bounds, lower > 0
  double upper = 1e3;
  double tau0 = 0.005;
  int outer_budget = 6;
  int inner_budget = 24;  // objective evaluations per outer iteration
  double initial_step = 0.7;  // log-space pattern step
  double min_step = 0.02;
  double growth_cap = 1.5;
  double slope_pin = 0.99;
  double slope_follower = 0.99;
  SearchOptions search;
  std::uint64_t seed = 1;
};

struct ObjectiveValue {
  bool valid = false;
  double value = -std::numeric_limits<double>::infinity();
  MaxDelayEstimate estimate;
  std::optional<Certificate> certificate;
  std::string reason;
};

/// Certificate search at tau followed by the max-delay estimate; invalid
/// when a gain is not positive, some phi_i is not Hurwitz, or no
/// certificate is found.
ObjectiveValue objective(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains, double tau,
                         const TuneConfig& config);

struct TuneStep {
  int iteration = 0;
  std::string phase;   // "init", "tau", "gains"
  double tau = 0.0;    // delay bound the entry was checked at
  double objective = 0.0;
  std::array<double, 3> ratios{};
  bool feasible = false;
  double best_tau = 0.0;  // best certified bound so far
  GainSet gains;
  std::optional<Certificate> certificate;
  std::string note;
};

struct TuneResult {
  bool success = false;
  GainSet gains;
  double tau = 0.0;
  std::optional<Certificate> certificate;
  LmiReport report;
  std::vector<TuneStep> history;
  int evaluations = 0;
  std::string stop_reason;
};

/// Outer loop: certify at tau, estimate the admissible delay, re-check at
/// min(estimate, growth_cap * tau), then improve gains by pattern search in
/// log coordinates at the current tau. Stops on a failed re-check, on
/// stagnation (< 1e-3 relative gain over 3 iterations) or when the budget
/// runs out, and returns the last certified iterate.
TuneResult run_tuner(const TuneConfig& config, const CompanionPlant& plant, const DirectedTopology& topology);

/// Gains flattened as pins (ascending agent) then follower edges (row-major).
std::vector<double> stack_gains(const GainSet& gains);
GainSet unstack_gains(const GainSet& shape, const std::vector<double>& values);

}  // namespace lfc
