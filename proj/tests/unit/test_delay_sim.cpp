#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "lfc/config.hpp"
#include "lfc/delay_sim.hpp"
#include "lfc/error.hpp"
#include "lfc/fixture.hpp"

using namespace lfc;

TEST_CASE("generated profiles stay inside the admissible class") {
  const DelayProfile p = DelayProfile::generate(5, 0.8, 1.0, 0.05, 40.0);
  double worst_slope = 0.0;
  for (int k = 0; k <= 400000; ++k) {
    const double t = 1e-4 * k;
    const double v = p.value(t);
    CHECK_GE(v, 0.0);
    CHECK_LT(v, 0.8);
    if (k > 0) worst_slope = std::max(worst_slope, std::abs(v - p.value(t - 1e-4)) / 1e-4);
  }
  CHECK(worst_slope <= 1.0 + 1e-9);
  CHECK(p.max_abs_slope() <= 1.0 + 1e-12);
  CHECK(p.times().back() >= 40.0);
}

TEST_CASE("zero slope bound gives a constant delay") {
  const DelayProfile p = DelayProfile::generate(9, 0.8, 0.0, 0.05, 10.0);
  const double v0 = p.value(0.0);
  for (double t : {0.3, 4.0, 9.99, 12.0}) CHECK(p.value(t) == v0);
}

TEST_CASE("profiles are deterministic in the seed") {
  const DirectedTopology topo = build_experiment(benchmark_config()).topology;
  DelaySettings s;
  const DelayProfiles a = generate_delay_profiles(topo, s, 10.0);
  const DelayProfiles b = generate_delay_profiles(topo, s, 10.0);
  REQUIRE(a.follower.size() == 4);
  REQUIRE(a.pin.size() == 1);
  for (std::size_t c = 0; c < a.follower.size(); ++c) CHECK(a.follower[c].values() == b.follower[c].values());
  s.seed = 2;
  const DelayProfiles c = generate_delay_profiles(topo, s, 10.0);
  CHECK(c.pin[0].values() != a.pin[0].values());
  CHECK(a.respects(0.8, 0.99));
  CHECK(a.max_delay() < 0.8);
}

TEST_CASE("zero horizon yields an empty trace") {
  ExperimentConfig cfg = benchmark_config();
  cfg.integrator.horizon = 0.0;
  const Experiment ex = build_experiment(cfg);
  const SimTrace tr = simulate(ex, make_profiles(ex));
  CHECK(tr.samples() <= 1);
}

TEST_CASE("zero gains, zero rho: every agent follows x' = Ax") {
  Rng rng(8);
  test::SmallCase c = test::small_case(rng);
  for (auto& [e, k] : c.gains.pin) k.setZero();
  for (auto& [e, k] : c.gains.follower) k.setZero();
  c.gains.rho = 0.0;
  const DelayProfiles prof = generate_delay_profiles(c.topology, DelaySettings{0.3, 0.5, 0.05, 3}, 2.0);
  const DisturbanceModel w = DisturbanceModel::zero(c.topology.agents());
  SimulationSetup s{&c.plant, &c.topology, &c.gains, &prof, &w};
  s.initial.leader = Vector::Zero(2);
  for (int i = 0; i < c.topology.agents(); ++i) s.initial.agents.push_back(Vector::Constant(2, 1.0 + i));
  s.protocol = ProtocolKind::discontinuous;
  s.step = 1e-3;
  s.horizon = 2.0;
  const SimTrace tr = integrate(s);
  const Matrix phi = (c.plant.A() * 2.0).exp();
  for (int i = 0; i < c.topology.agents(); ++i)
    CHECK((tr.x[static_cast<std::size_t>(i)].back() - phi * s.initial.agents[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() < 1e-9);
}

// rho below the disturbance offset keeps sign(s) fixed after the first step, so
// s is smooth and a central difference resolves its derivative
TEST_CASE("sliding variable obeys s' = b (w - rho sign s) and s' = b (w - rho v)") {
  for (ProtocolKind kind : {ProtocolKind::discontinuous, ProtocolKind::smoothed}) {
    ExperimentConfig cfg = benchmark_variant("smoothed");
    cfg.protocol.kind = kind;
    cfg.protocol.rho = 2.0;
    cfg.disturbance.kind = "biased_sinusoid";
    cfg.disturbance.coefficients.assign(4, SinusoidCoefficients{5.0, 1.0, 1.0});
    cfg.integrator.horizon = 2.0;
    const Experiment ex = build_experiment(cfg);
    const SimTrace tr = simulate(ex, make_profiles(ex));
    const double h = tr.step;
    double worst = 0.0;
    for (int i = 0; i < tr.agents; ++i) {
      const auto& s = tr.s[static_cast<std::size_t>(i)];
      const auto& v = tr.upsilon[static_cast<std::size_t>(i)];
      for (std::size_t k = 2; k + 1 < tr.samples(); ++k) {
        if (tr.time[k] < 0.1) continue;  // filter transient, v'' ~ 1/T^2
        REQUIRE(s[k - 1] > 0.0);
        const double fd = (s[k + 1] - s[k - 1]) / (2.0 * h);
        const double switching = kind == ProtocolKind::smoothed ? v[k] : 1.0;
        const double model = ex.plant.b_gain() * (disturbance_value(ex.disturbance, i, tr.time[k]) - ex.gains.rho * switching);
        worst = std::max(worst, std::abs(fd - model));
      }
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("integrator warnings") {
  ExperimentConfig cfg = benchmark_config();
  cfg.integrator.horizon = 0.5;
  cfg.integrator.step = 0.05;
  cfg.delays.tau_max = 0.2;
  const Experiment ex = build_experiment(cfg);
  const SimTrace tr = simulate(ex, make_profiles(ex));
  CHECK_FALSE(tr.warnings.empty());
}

TEST_CASE("control total variation of a constant control is zero") {
  SimTrace tr;
  tr.agents = 1;
  tr.time = {0.0, 1.0, 2.0, 3.0};
  tr.u = {{1.0, 1.0, 1.0, 1.0}};
  CHECK(control_total_variation(tr, 0.0, 3.0) == 0.0);
  tr.u = {{1.0, -1.0, 1.0, 0.0}};
  CHECK(control_total_variation(tr, 0.0, 3.0) == doctest::Approx(5.0));
}
