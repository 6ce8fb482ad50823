#pragma once

#include <iosfwd>
#include <string>

#include "lfc/delay_sim.hpp"
#include "lfc/gain_tuner.hpp"

namespace lfc {

/// Columns t, x{i}_{k}, x0_{k}, u{i}, s{i}, err{i} (1-based), then V when
/// the trace carries it. One row per sample.
void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_trace_csv(const std::string& path, const SimTrace& trace);

/// Knots of every channel: channel,kind,t,tau.
void write_profiles_csv(std::ostream& out, const DelayProfiles& profiles);
void write_profiles_csv(const std::string& path, const DelayProfiles& profiles);

/// Tuner iteration log: iteration,phase,tau,objective,ratio1..3,feasible,best_tau,note.
void write_tune_log(const std::string& path, const TuneResult& result);

}  // namespace lfc
