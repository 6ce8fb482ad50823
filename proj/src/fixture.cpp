#include "lfc/fixture.hpp"

#include "lfc/error.hpp"

namespace lfc {

ExperimentConfig benchmark_config() {
  ExperimentConfig c;
  c.name = "benchmark";
  c.plant = {{1.0, 2.0, 3.0}, 1.0};
  c.topology.adjacency = {{0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 1}, {1, 1, 0, 0}};
  c.topology.pinning = {1, 0, 0, 0};
  c.gains.pin = {{1, {0.01, 0.011, 3.87}}};
  c.gains.follower = {
      {{1, 3}, {0.001, 0.822, 0.188}},
      {{2, 4}, {0.01, 0.01, 0.143}},
      {{3, 4}, {0.01, 0.01, 0.01}},
      {{4, 1}, {0.01, 0.01, 0.01}},
      {{4, 2}, {0.80, 0.11, 1.61}},
  };
  c.initial.leader = {-12, 9, 4};
  c.initial.agents = {{-1, 13, -8}, {-4, 8, 5}, {4, -13, 5}, {13, -12, 0}};
  c.delays = {0.8, 0.99, 0.05, 1, "random"};
  c.disturbance.kind = "zero";
  c.disturbance.seed = kBenchmarkDisturbanceSeed;
  c.protocol.kind = ProtocolKind::linear_only;
  c.protocol.rho = 10.0;
  c.protocol.t_filter = 0.01;
  c.integrator = {1e-3, 40.0};
  c.certificate.tau = 0.01;
  c.output.directory = "out";
  return c;
}

std::vector<std::string> benchmark_variants() { return {"nominal", "disturbed", "smoothed"}; }

ExperimentConfig benchmark_variant(const std::string& variant) {
  ExperimentConfig c = benchmark_config();
  c.name = variant;
  if (variant == "nominal") return c;
  c.disturbance.kind = "random_sinusoid";
  if (variant == "disturbed") return c;
  if (variant == "smoothed") {
    c.protocol.kind = ProtocolKind::smoothed;
    return c;
  }
  throw ValidationError("unknown variant '" + variant + "' (expected nominal, disturbed or smoothed)");
}

}  // namespace lfc
