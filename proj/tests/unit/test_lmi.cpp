#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lfc/config.hpp"
#include "lfc/error.hpp"
#include "lfc/fixture.hpp"
#include "lfc/lmi_cert.hpp"

using namespace lfc;

namespace {

// F = -I split as A0 = -I/2 and one pin block -I/2; one zero follower block
ClosedLoopMatrices hand_instance() {
  const Matrix I = Matrix::Identity(2, 2);
  ClosedLoopMatrices m;
  m.agents = 1;
  m.order = 2;
  m.A0 = -0.5 * I;
  m.Ahat = {-0.5 * I};
  m.Atilde = {Matrix::Zero(2, 2)};
  m.pin_agents = {0};
  m.F = -I;
  return m;
}

Certificate hand_certificate() {
  const Matrix I = Matrix::Identity(2, 2);
  return Certificate{I, {0.1 * I}, {0.1 * I}, {0.1 * I}, {0.1 * I}};
}

double max_eig_2x2(double a, double b, double d) {
  return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b);
}

}  // namespace

TEST_CASE("zero gains give F = A0 and the benchmark block structure") {
  const Experiment ex = build_experiment(benchmark_config());
  GainSet zero = ex.gains;
  for (auto& [e, k] : zero.pin) k.setZero();
  for (auto& [e, k] : zero.follower) k.setZero();
  const ClosedLoopMatrices z = assemble_closed_loop(ex.plant, ex.topology, zero);
  CHECK((z.F - z.A0).isZero());

  const ClosedLoopMatrices m = assemble_closed_loop(ex.plant, ex.topology, ex.gains);
  REQUIRE(m.Ahat.size() == 1);
  CHECK(m.Atilde.size() == 4);
  const Matrix block = -ex.plant.B() * ex.gains.pin.at(0);
  CHECK((m.Ahat[0].topLeftCorner(3, 3) - block).isZero());
  Matrix rest = m.Ahat[0];
  rest.topLeftCorner(3, 3).setZero();
  CHECK(rest.isZero());
  CHECK((m.F - m.A0 - m.sum_hat() - m.sum_tilde()).isZero());
}

TEST_CASE("with zero delays the simulated error derivative equals F e") {
  ExperimentConfig cfg = benchmark_variant("nominal");
  cfg.delays.profile = "zero";
  cfg.integrator.horizon = 1.0;
  const Experiment ex = build_experiment(cfg);
  const SimTrace tr = simulate(ex, make_profiles(ex));
  const ClosedLoopMatrices m = assemble_closed_loop(ex.plant, ex.topology, ex.gains);
  const int n = ex.plant.order();
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.samples(); k += 50) {
    Vector edot(m.dimension());
    for (int i = 0; i < tr.agents; ++i) {
      const Vector xi = tr.x[static_cast<std::size_t>(i)][k];
      edot.segment(i * n, n) = agent_rhs(ex.plant, xi, tr.u[static_cast<std::size_t>(i)][k], 0.0) - leader_rhs(ex.plant, tr.leader[k]);
    }
    worst = std::max(worst, (edot - m.F * tr.stacked_error(k)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("hand instance: all three LMIs by hand") {
  const ClosedLoopMatrices m = hand_instance();
  const DelayBounds b{0.01, 0.0, 0.0};
  const LmiReport r = check_feasibility(m, hand_certificate(), b);
  CHECK(r.feasible);
  // LMI1 decouples into copies of [[-1.7985, -0.005], [-0.005, -0.001]] and -0.001
  const double l1 = std::max(max_eig_2x2(-1.8 + 0.03 * 0.25 * 0.2, -0.005, -0.001), -0.001);
  CHECK(r.max_eigenvalue[0] == doctest::Approx(l1).epsilon(1e-9));
  CHECK(r.max_eigenvalue[1] == doctest::Approx(-0.0985).epsilon(1e-12));
  CHECK(r.max_eigenvalue[2] == doctest::Approx(-0.1).epsilon(1e-12));

  const SearchResult s = search_certificate(m, b);
  REQUIRE(s.certificate);
  CHECK(check_feasibility(m, *s.certificate, b).feasible);
}

TEST_CASE("zero delay bound reduces to a Lyapunov inequality") {
  Rng rng(12);
  const test::SmallCase c = test::small_case(rng);
  const ClosedLoopMatrices m = assemble_closed_loop(c.plant, c.topology, c.gains);
  REQUIRE(is_hurwitz(m.F));
  const int d = m.dimension();
  const Matrix I = Matrix::Identity(d, d);
  Certificate cert;
  cert.P = solve_lyapunov(m.F, -I);
  for (std::size_t k = 0; k < m.Ahat.size(); ++k) {
    cert.Q.push_back(1e-4 * I);
    cert.R.push_back(1e-4 * I);
  }
  for (std::size_t k = 0; k < m.Atilde.size(); ++k) {
    cert.Qbar.push_back(1e-4 * I);
    cert.Rbar.push_back(1e-4 * I);
  }
  CHECK(check_feasibility(m, cert, DelayBounds{0.0, 0.0, 0.0}).feasible);
}

TEST_CASE("non-positive-definite certificates are rejected") {
  Certificate bad = hand_certificate();
  bad.P(1, 1) = -1.0;
  CHECK_THROWS_AS(check_feasibility(hand_instance(), bad, DelayBounds{0.01, 0.0, 0.0}), ValidationError);
  Certificate short_family = hand_certificate();
  short_family.Q.clear();
  CHECK_THROWS_AS(check_feasibility(hand_instance(), short_family, DelayBounds{0.01, 0.0, 0.0}), ValidationError);
}

TEST_CASE("unstable F yields an immediate verdict") {
  ClosedLoopMatrices m = hand_instance();
  m.A0 = 0.5 * Matrix::Identity(2, 2);
  m.F = m.A0 + m.Ahat[0] + Matrix::Identity(2, 2) * 0.1;
  const SearchResult s = search_certificate(m, DelayBounds{0.01, 0.0, 0.0});
  CHECK_FALSE(s.certificate);
  CHECK(s.reason == "F not Hurwitz");
}

TEST_CASE("slope bound of one collapses the estimate") {
  const ClosedLoopMatrices m = hand_instance();
  const MaxDelayEstimate loose = estimate_max_delay(m, hand_certificate(), DelayBounds{0.01, 0.0, 0.0});
  CHECK(loose.valid);
  CHECK(loose.tau_hat > 0.0);
  const MaxDelayEstimate e = estimate_max_delay(m, hand_certificate(), DelayBounds{0.01, 1.0, 0.0});
  CHECK(e.tau_hat == 0.0);
}

TEST_CASE("ratio bound") {
  const Matrix I = Matrix::Identity(3, 3);
  CHECK(ratio_bound(-I, I) == doctest::Approx(1.0));
  CHECK(ratio_bound(-2.0 * I, I) == doctest::Approx(2.0));
  const Matrix m1 = Eigen::Vector2d(-2.0, -5.0).asDiagonal();
  const Matrix m2 = Eigen::Vector2d(1.0, 4.0).asDiagonal();
  const double xi = ratio_bound(m1, m2);
  CHECK(xi == doctest::Approx(0.5));
  CHECK(lambda_max(m1 + xi * m2) == doctest::Approx(-1.5));
  CHECK_THROWS_AS(ratio_bound(I, I), ValidationError);

  // tight whenever the extreme eigenvectors align
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const Matrix q = Eigen::HouseholderQR<Matrix>(test::random_matrix(rng, n, n)).householderQ();
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = -rng.uniform(1.0, 10.0);
      b(i) = rng.uniform(0.1, 1.0);
    }
    a(0) = -0.5;
    b(0) = 2.0;
    const Matrix n1 = q * a.asDiagonal() * q.transpose();
    const Matrix n2 = q * b.asDiagonal() * q.transpose();
    const double x = ratio_bound(n1, n2);
    CHECK(lambda_max(n1 + x * n2) <= 1e-12);
    CHECK(lambda_max(n1 + (x + 1e-6) * n2) > 0.0);
  }
}

TEST_CASE("hurwitz test of the pinned closed loop") {
  const Experiment ex = build_experiment(benchmark_config());
  const HurwitzReport r = hurwitz_phi(ex.plant, ex.topology, ex.gains, 0);
  CHECK(r.gamma(0) == doctest::Approx(1.01));
  CHECK(r.gamma(1) == doctest::Approx(2.011));
  CHECK(r.gamma(2) == doctest::Approx(6.87));
  CHECK(r.hurwitz);
  CHECK(*r.routh);
  CHECK_THROWS_AS(hurwitz_phi(ex.plant, ex.topology, ex.gains, 1), ValidationError);

  CHECK(hurwitz_gamma(Eigen::Vector3d(1.0, 2.0, 3.0)).hurwitz);
  const HurwitzReport bad = hurwitz_gamma(Eigen::Vector3d(101.0, 2.0, 3.0));
  CHECK_FALSE(bad.hurwitz);
  CHECK_FALSE(*bad.routh);
}

TEST_CASE("follower blocks annihilate consensus directions") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const test::SmallCase c = test::small_case(rng);
    const ClosedLoopMatrices m = assemble_closed_loop(c.plant, c.topology, c.gains);
    const Vector v = test::random_matrix(rng, m.order, 1);
    for (const auto& at : m.Atilde) CHECK((at * v.replicate(m.agents, 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("enum names round-trip") {
  CHECK(third_lmi_from_string(to_string(ThirdLmi::pin_family)) == ThirdLmi::pin_family);
  CHECK(search_method_from_string(to_string(SearchMethod::projection)) == SearchMethod::projection);
  CHECK_THROWS_AS(search_method_from_string("ellipsoid"), ValidationError);
}
