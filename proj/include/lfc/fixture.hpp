#pragma once

#include <string>
#include <vector>

#include "lfc/config.hpp"

namespace lfc {

/// Four-agent, third-order benchmark: a = (1, 2, 3), b = 1, one pinned
/// agent, six gain vectors, tau* = 0.8 s, Gamma = 9, rho = 10, T = 0.01 s.
ExperimentConfig benchmark_config();

/// Scenario variants of the benchmark:
///   nominal    linear-only protocol, no disturbance
///   disturbed  linear-only protocol with biased sinusoidal disturbances
///   smoothed   smoothed protocol with the same disturbances
ExperimentConfig benchmark_variant(const std::string& variant);
std::vector<std::string> benchmark_variants();

/// Seed of the benchmark's disturbance draw.
inline constexpr std::uint64_t kBenchmarkDisturbanceSeed = 20;

}  // namespace lfc
