#include "lfc/gain_tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lfc/error.hpp"
#include "lfc/random.hpp"

namespace lfc {

std::vector<double> stack_gains(const GainSet& gains) {
  std::vector<double> v;
  for (const auto& [agent, k] : gains.pin) v.insert(v.end(), k.data(), k.data() + k.size());
  for (const auto& [edge, k] : gains.follower) v.insert(v.end(), k.data(), k.data() + k.size());
  return v;
}

GainSet unstack_gains(const GainSet& shape, const std::vector<double>& values) {
  GainSet g = shape;
  std::size_t at = 0;
  auto fill = [&](RowVector& k) {
    for (Eigen::Index c = 0; c < k.size(); ++c) {
      if (at >= values.size()) throw ValidationError("stacked gain vector is too short");
      k(c) = values[at++];
    }
  };
  for (auto& [agent, k] : g.pin) fill(k);
  for (auto& [edge, k] : g.follower) fill(k);
  if (at != values.size()) throw ValidationError("stacked gain vector is too long");
  return g;
}

namespace {

DelayBounds bounds_at(const TuneConfig& c, double tau) { return DelayBounds{tau, c.slope_pin, c.slope_follower}; }

std::string constraint_violation(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains) {
  if (!gains_strictly_positive(gains)) return "gain entries must be strictly positive";
  for (int agent : topology.pinned_agents())
    if (!hurwitz_phi(plant, topology, gains, agent).hurwitz) return "phi_" + std::to_string(agent + 1) + " is not Hurwitz";
  return {};
}

}  // namespace

ObjectiveValue objective(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains, double tau,
                         const TuneConfig& config) {
  ObjectiveValue out;
  validate_gains(gains, topology, plant.order());
  out.reason = constraint_violation(plant, topology, gains);
  if (!out.reason.empty()) return out;
  const ClosedLoopMatrices mats = assemble_closed_loop(plant, topology, gains);
  const DelayBounds b = bounds_at(config, tau);
  SearchResult found = search_certificate(mats, b, config.search);
  if (!found.certificate) {
    out.reason = found.reason;
    return out;
  }
  out.estimate = estimate_max_delay(mats, *found.certificate, b, config.search.lmi);
  if (!out.estimate.valid) {
    out.reason = "max-delay estimate undefined";
    return out;
  }
  out.valid = true;
  out.value = out.estimate.tau_hat;
  out.certificate = std::move(found.certificate);
  out.reason = "certified";
  return out;
}

TuneResult run_tuner(const TuneConfig& config, const CompanionPlant& plant, const DirectedTopology& topology) {
  if (!leader_globally_reachable(topology)) throw ValidationError("the leader is not globally reachable");
  if (!(config.lower > 0.0) || !(config.upper > config.lower)) throw ValidationError("tuner bounds need 0 < lower < upper");
  if (config.outer_budget < 1 || config.inner_budget < 0) throw ValidationError("tuner budget must be at least 1");
  if (!(config.tau0 > 0.0)) throw ValidationError("initial delay bound must be positive");

  TuneResult result;
  Rng rng(mix_seed(config.seed, 0x7475));
  auto record = [&](int it, const std::string& phase, double tau, const ObjectiveValue& ov, const GainSet& g, std::string note) {
    TuneStep s;
    s.iteration = it;
    s.phase = phase;
    s.tau = tau;
    s.objective = ov.valid ? ov.value : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 3; ++k) s.ratios[k] = ov.estimate.terms[k].value;
    s.feasible = ov.certificate.has_value();
    s.gains = g;
    s.certificate = ov.certificate;
    s.note = std::move(note);
    s.best_tau = result.tau;
    result.history.push_back(std::move(s));
  };

  GainSet gains = config.initial;
  double tau = config.tau0;
  ObjectiveValue current = objective(plant, topology, gains, tau, config);
  ++result.evaluations;
  if (!current.valid) {
    result.stop_reason = "no certificate at the initial delay bound: " + current.reason;
    record(0, "init", tau, current, gains, result.stop_reason);
    return result;
  }
  result.success = true;
  result.gains = gains;
  result.tau = tau;
  result.certificate = current.certificate;
  record(0, "init", tau, current, gains, "initial certification");

  std::vector<double> coords = stack_gains(gains);
  for (double& c : coords) c = std::log(std::clamp(c, config.lower, config.upper));
  double step = config.initial_step;
  std::vector<double> best_by_iteration{tau};
  result.stop_reason = "outer budget exhausted";

  for (int it = 1; it < config.outer_budget; ++it) {
    // delay update from the current certificate
    const double tau_try = std::min(current.value, config.growth_cap * tau);
    if (tau_try > tau * (1.0 + 1e-9)) {
      ObjectiveValue at_try = objective(plant, topology, gains, tau_try, config);
      ++result.evaluations;
      if (!at_try.valid) {
        record(it, "tau", tau_try, at_try, gains, "re-check failed");
        result.stop_reason = "re-check at the estimated delay failed: " + at_try.reason;
        break;
      }
      tau = tau_try;
      current = std::move(at_try);
      result.tau = tau;
      result.gains = gains;
      result.certificate = current.certificate;
      record(it, "tau", tau, current, gains, "delay bound raised");
    }

    // opportunistic pattern search on the estimate at the current tau
    std::vector<std::size_t> order(coords.size());
    std::iota(order.begin(), order.end(), 0);
    int evals = 0;
    bool improved_any = false;
    while (evals < config.inner_budget && step >= config.min_step) {
      for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
      bool improved = false;
      for (std::size_t c : order) {
        for (double dir : {1.0, -1.0}) {
          if (evals >= config.inner_budget) break;
          std::vector<double> trial = coords;
          trial[c] = std::clamp(trial[c] + dir * step, std::log(config.lower), std::log(config.upper));
          if (trial[c] == coords[c]) continue;
          std::vector<double> values(trial.size());
          std::transform(trial.begin(), trial.end(), values.begin(), [](double v) { return std::exp(v); });
          const GainSet candidate = unstack_gains(gains, values);
          ObjectiveValue ov = objective(plant, topology, candidate, tau, config);
          ++evals;
          ++result.evaluations;
          if (ov.valid && ov.value > current.value) {
            coords = std::move(trial);
            gains = candidate;
            current = std::move(ov);
            improved = improved_any = true;
            break;
          }
        }
        if (improved || evals >= config.inner_budget) break;
      }
      if (improved) step *= 2.0;
      else step *= 0.5;
      step = std::min(step, config.initial_step);
    }
    if (improved_any) {
      result.gains = gains;
      result.certificate = current.certificate;
      record(it, "gains", tau, current, gains, "gains improved");
    }

    best_by_iteration.push_back(tau);
    if (best_by_iteration.size() >= 4) {
      const double before = best_by_iteration[best_by_iteration.size() - 4];
      if ((tau - before) / before < 1e-3) {
        result.stop_reason = "stagnated";
        break;
      }
    }
    if (!improved_any && tau_try <= tau * (1.0 + 1e-9) && step < config.min_step) {
      result.stop_reason = "no further improvement";
      break;
    }
  }

  // end-to-end re-verification of the returned iterate
  const ClosedLoopMatrices mats = assemble_closed_loop(plant, topology, result.gains);
  result.report = check_feasibility(mats, *result.certificate, bounds_at(config, result.tau), config.search.lmi);
  result.success = result.report.feasible && constraint_violation(plant, topology, result.gains).empty();
  if (!result.success) result.stop_reason += "; final verification failed";
  return result;
}

}  // namespace lfc
