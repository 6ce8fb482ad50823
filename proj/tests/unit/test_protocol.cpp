#include <doctest.h>

#include "lfc/error.hpp"
#include "lfc/protocol.hpp"

using namespace lfc;

namespace {

const CompanionPlant kPlant({1.0, 2.0, 3.0}, 1.0);

DirectedTopology single_pin() {
  Vector p = Vector::Ones(1);
  return DirectedTopology(Matrix::Zero(1, 1), p);
}

GainSet pin_gain(RowVector k) {
  GainSet g;
  g.pin[0] = std::move(k);
  g.rho = 10.0;
  return g;
}

}  // namespace

TEST_CASE("linear consensus term") {
  const DirectedTopology topo = single_pin();
  const GainSet g = pin_gain((RowVector(3) << 1.0, 0.0, 0.0).finished());
  const Vector xi = (Vector(3) << 2.0, 5.0, 7.0).finished();
  const std::vector<LinkSample> samples{{Edge{0, kLeader}, xi, Vector::Zero(3)}};
  CHECK(linear_consensus_term(g, topo, samples)(0) == doctest::Approx(-2.0));

  const std::vector<LinkSample> equal{{Edge{0, kLeader}, xi, xi}};
  CHECK(linear_consensus_term(g, topo, equal)(0) == 0.0);

  const GainSet zero = pin_gain(RowVector::Zero(3));
  CHECK(linear_consensus_term(zero, topo, samples)(0) == 0.0);

  CHECK_THROWS_AS(linear_consensus_term(g, topo, {}), ValidationError);
}

TEST_CASE("gain validation") {
  const DirectedTopology topo = single_pin();
  CHECK_NOTHROW(validate_gains(pin_gain(RowVector::Ones(3)), topo, 3));
  CHECK_THROWS_AS(validate_gains(pin_gain(RowVector::Ones(2)), topo, 3), ValidationError);
  GainSet missing;
  CHECK_THROWS_AS(validate_gains(missing, topo, 3), ValidationError);
  GainSet extra = pin_gain(RowVector::Ones(3));
  extra.follower[Edge{0, 1}] = RowVector::Ones(3);
  CHECK_THROWS_AS(validate_gains(extra, topo, 3), ValidationError);
  GainSet bad_filter = pin_gain(RowVector::Ones(3));
  bad_filter.t_filter = 0.0;
  CHECK_THROWS_AS(validate_gains(bad_filter, topo, 3), ValidationError);
  CHECK(gains_strictly_positive(pin_gain(RowVector::Ones(3))));
  CHECK_FALSE(gains_strictly_positive(pin_gain((RowVector(3) << 1.0, 0.0, 1.0).finished())));
}

TEST_CASE("sliding variable and initial controller state") {
  CHECK(sliding_value((Vector(3) << 1.0, -1.0, 0.0).finished(), 0.0) == 0.0);
  CHECK(sliding_value((Vector(3) << 1.0, 2.0, 3.0).finished(), 4.0) == 10.0);
  const std::vector<Vector> x0{(Vector(3) << 0.3, -4.0, 2.2).finished(), (Vector(3) << 1.0, 1.0, 1.0).finished()};
  const ControllerState c = ControllerState::initial(x0);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    CHECK(sliding_value(x0[i], c.z(static_cast<Eigen::Index>(i))) == 0.0);
    CHECK(c.upsilon(static_cast<Eigen::Index>(i)) == 0.0);
  }
}

TEST_CASE("integral-state dynamics under both sign conventions") {
  const Vector x = Vector::Unit(3, 2);
  CHECK(z_rhs(kPlant, SlidingSign::additive, x, 0.0) == doctest::Approx(-2.0));
  CHECK(z_rhs(kPlant, SlidingSign::consistent, x, 0.0) == doctest::Approx(2.0));
  CHECK(z_rhs(kPlant, SlidingSign::consistent, Vector::Zero(3), 0.0) == 0.0);
  // the consistent convention cancels 1'(Ax + B lin)
  const Vector y = (Vector(3) << 0.5, -1.5, 2.0).finished();
  const double lin = 0.7;
  CHECK(agent_rhs(kPlant, y, lin, 0.0).sum() + z_rhs(kPlant, SlidingSign::consistent, y, lin) == doctest::Approx(0.0));
}

TEST_CASE("control laws") {
  GainSet g = pin_gain(RowVector::Ones(3));
  CHECK(control_discontinuous(g, 0.0, 1.5) == 1.5);
  CHECK(control_discontinuous(g, -1.0, 0.0) == 10.0);
  CHECK(control_discontinuous(g, 2.0, 0.0) == -10.0);

  CHECK(control_smoothed(g, 1.0, 0.0, 1.5).u == 1.5);
  g.t_filter = 0.01;
  g.filter_scaling = FilterScaling::rho_input;
  CHECK(control_smoothed(g, 1.0, 9.0, 0.0).upsilon_rate == doctest::Approx(100.0));
  g.filter_scaling = FilterScaling::consistent;
  CHECK(control_smoothed(g, 1.0, 0.0, 0.0).upsilon_rate == doctest::Approx(100.0));
  CHECK(control_smoothed(g, 1.0, 1.0, 0.0).u == doctest::Approx(-10.0));
}

TEST_CASE("enum names round-trip") {
  for (auto k : {ProtocolKind::linear_only, ProtocolKind::discontinuous, ProtocolKind::smoothed})
    CHECK(protocol_kind_from_string(to_string(k)) == k);
  for (auto s : {FilterScaling::consistent, FilterScaling::rho_input}) CHECK(filter_scaling_from_string(to_string(s)) == s);
  for (auto s : {SlidingSign::consistent, SlidingSign::additive}) CHECK(sliding_sign_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(protocol_kind_from_string("bang-bang"), ValidationError);
}
