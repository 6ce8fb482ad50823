#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfc/delay_sim.hpp"
#include "lfc/gain_tuner.hpp"
#include "lfc/graph_topology.hpp"
#include "lfc/lmi_cert.hpp"
#include "lfc/plant.hpp"
#include "lfc/protocol.hpp"

namespace lfc {

struct PlantConfig {
  std::vector<double> a{1.0, 2.0, 3.0};
  double b = 1.0;
};

struct TopologyConfig {
  std::vector<std::vector<double>> adjacency;  // alpha_ij, rows = receiving agent
  std::vector<double> pinning;                 // alpha_i0
  DelaySymmetry symmetry = DelaySymmetry::shared;
};

/// Gains keyed by 1-based agent numbers: pin "i", follower "i,j".
struct GainsConfig {
  std::vector<std::pair<int, std::vector<double>>> pin;
  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> follower;
};

struct DelayConfig {
  double tau_max = 0.8;
  double slope_bound = 0.99;
  double resample_interval = 0.05;
  std::uint64_t seed = 1;
  /// "random" (piecewise-linear profiles), "constant" (tau_max * (1 - 1e-6)) or "zero".
  std::string profile = "random";
};

struct DisturbanceConfig {
  /// "zero", "biased_sinusoid" (explicit coefficients) or "random_sinusoid".
  std::string kind = "zero";
  std::vector<SinusoidCoefficients> coefficients;
  SinusoidRanges ranges;
  std::uint64_t seed = 7;
};

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::linear_only;
  double rho = 10.0;
  double t_filter = 0.01;
  FilterScaling filter_scaling = FilterScaling::consistent;
  SlidingSign sliding_sign = SlidingSign::consistent;
};

struct IntegratorConfig {
  double step = 1e-3;
  double horizon = 40.0;
};

struct InitialConfig {
  std::vector<double> leader;
  std::vector<std::vector<double>> agents;
};

struct CertificateConfig {
  double tau = 0.01;
  double margin = 1e-8;
  SearchMethod method = SearchMethod::barrier;
  ThirdLmi third_lmi = ThirdLmi::follower_family;
  int budget = 5000;
  int newton_budget = 400;
  double gap_tolerance = 1e-3;
  double early_stop = 0.0;
};

struct TunerConfig {
  double tau0 = 0.005;
  double lower = 1e-4;
  double upper = 1e3;
  int outer_budget = 6;
  int inner_budget = 24;
  double initial_step = 0.7;
  double min_step = 0.02;
  double growth_cap = 1.5;
  std::uint64_t seed = 1;
};

struct OutputConfig {
  std::string directory = "out";
  bool plot = false;
  bool lyapunov = false;  // add V to the trace when a certificate is available
};

struct ExperimentConfig {
  std::string name = "experiment";
  PlantConfig plant;
  TopologyConfig topology;
  GainsConfig gains;
  DelayConfig delays;
  DisturbanceConfig disturbance;
  ProtocolConfig protocol;
  IntegratorConfig integrator;
  InitialConfig initial;
  CertificateConfig certificate;
  TunerConfig tuner;
  OutputConfig output;
};

/// Strict parsing: unknown keys, wrong types and bad values raise
/// ValidationError naming the field path. Missing sections keep defaults,
/// except plant, topology, gains and initial, which are required.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Live objects built from a validated configuration.
struct Experiment {
  ExperimentConfig config;
  CompanionPlant plant;
  DirectedTopology topology;
  GainSet gains;
  DisturbanceModel disturbance;
  InitialStates initial;
};

/// Cross-validates (dimensions, positivity, reachability) and builds.
Experiment build_experiment(const ExperimentConfig& config);

DelayProfiles make_profiles(const Experiment& experiment);
DelayBounds certificate_bounds(const ExperimentConfig& config, double tau);
SearchOptions search_options(const ExperimentConfig& config);
TuneConfig tune_config(const Experiment& experiment);
SimTrace simulate(const Experiment& experiment, const DelayProfiles& profiles);

}  // namespace lfc
