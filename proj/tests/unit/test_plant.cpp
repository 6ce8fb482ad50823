#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lfc/error.hpp"
#include "lfc/plant.hpp"

using namespace lfc;

namespace {
const CompanionPlant kPlant({1.0, 2.0, 3.0}, 1.0);
}

TEST_CASE("companion structure") {
  CHECK(kPlant.order() == 3);
  CHECK(kPlant.B()(2) == 1.0);
  CHECK(kPlant.B().head(2).isZero());
  CHECK(kPlant.A()(0, 1) == 1.0);
  CHECK(kPlant.A()(2, 0) == -1.0);
  CHECK_THROWS_AS(CompanionPlant({}, 1.0), ValidationError);
}

TEST_CASE("agent right-hand side") {
  CHECK(agent_rhs(kPlant, Vector::Unit(3, 0), 0.0, 0.0).isApprox(Vector::Unit(3, 2) * -1.0));
  CHECK(agent_rhs(kPlant, Vector::Zero(3), 0.0, 0.0).isZero());
  const Vector x = (Vector(3) << 0.3, -1.2, 2.5).finished();
  CHECK((agent_rhs(kPlant, x, 1.0, -1.0) - agent_rhs(kPlant, x, 0.0, 0.0)).isZero());
  CHECK_THROWS_AS(agent_rhs(kPlant, Vector::Zero(2), 0.0, 0.0), ValidationError);
}

TEST_CASE("leader right-hand side") {
  CHECK(leader_rhs(kPlant, Vector::Zero(3)).isZero());
  const Vector x0 = (Vector(3) << -12.0, 9.0, 4.0).finished();
  const Vector d = leader_rhs(kPlant, x0);
  CHECK(d(0) == 9.0);
  CHECK(d(1) == 4.0);
  CHECK(d(2) == -(1.0 * -12.0 + 2.0 * 9.0 + 3.0 * 4.0));
  CHECK(d(2) == -18.0);
  CHECK(spectral_abscissa(kPlant.A()) < 0.0);
}

TEST_CASE("disturbance models") {
  const DisturbanceModel z = DisturbanceModel::zero(3);
  CHECK(disturbance_bound(z) == 0.0);
  CHECK(disturbance_value(z, 2, 1.7) == 0.0);

  const DisturbanceModel one = DisturbanceModel::biased_sinusoid({{1.0, 2.0, 0.5}});
  CHECK(disturbance_value(one, 0, 0.5) == doctest::Approx(3.0));
  CHECK(disturbance_bound(one) == doctest::Approx(3.0));

  CHECK(SinusoidRanges{}.bound() == 9.0);
  const DisturbanceModel drawn = DisturbanceModel::draw_biased_sinusoid(4, SinusoidRanges{}, 20);
  CHECK(disturbance_bound(drawn) <= 9.0);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k <= 4000; ++k) CHECK_LE(std::abs(disturbance_value(drawn, i, 0.01 * k)), disturbance_bound(drawn) + 1e-12);

  const DisturbanceModel again = DisturbanceModel::draw_biased_sinusoid(4, SinusoidRanges{}, 20);
  for (int i = 0; i < 4; ++i) CHECK(disturbance_value(again, i, 1.234) == disturbance_value(drawn, i, 1.234));

  const DisturbanceModel held = DisturbanceModel::sampled(0.5, {{1.0, -2.0}}, 2.0);
  CHECK(disturbance_value(held, 0, 0.49) == 1.0);
  CHECK(disturbance_value(held, 0, 0.5) == -2.0);
  CHECK_THROWS_AS(DisturbanceModel::sampled(0.5, {{1.0, -3.0}}, 2.0), ValidationError);
}
