#include <doctest.h>

#include "lfc/delay_sim.hpp"
#include "lfc/error.hpp"
#include "lfc/lk_functional.hpp"

using namespace lfc;

namespace {

SimTrace constant_trace(const Vector& e, int samples) {
  SimTrace tr;
  tr.agents = 1;
  tr.order = static_cast<int>(e.size());
  tr.step = 0.01;
  tr.x.resize(1);
  for (int k = 0; k < samples; ++k) {
    tr.time.push_back(0.01 * k);
    tr.leader.push_back(Vector::Zero(e.size()));
    tr.x[0].push_back(e);
  }
  return tr;
}

Certificate identity_certificate(int n) {
  const Matrix I = Matrix::Identity(n, n);
  return Certificate{2.0 * I, {0.5 * I}, {}, {0.1 * I}, {}};
}

DelayProfiles pin_only(double tau) {
  DelayProfiles p;
  p.pin.push_back(DelayProfile::constant(tau));
  return p;
}

}  // namespace

TEST_CASE("zero error gives a zero functional") {
  const LkSeries v = evaluate_lk_functional(constant_trace(Vector::Zero(2), 50), identity_certificate(2), pin_only(0.1));
  for (double x : v.total) CHECK(x == 0.0);
}

TEST_CASE("constant error with zero delays reduces to e'Pe") {
  const Vector e = (Vector(2) << 1.0, -2.0).finished();
  const LkSeries v = evaluate_lk_functional(constant_trace(e, 50), identity_certificate(2), pin_only(0.0));
  for (std::size_t k = 0; k < v.total.size(); ++k) {
    CHECK(v.v1[k] == doctest::Approx(10.0));
    CHECK(v.total[k] == doctest::Approx(10.0));
  }
}

TEST_CASE("constant error with a constant delay: the Q window integrates exactly") {
  const Vector e = (Vector(2) << 1.0, 1.0).finished();
  const LkSeries v = evaluate_lk_functional(constant_trace(e, 80), identity_certificate(2), pin_only(0.2));
  // V2 = tau e'Qe = 0.2 * 1.0, including the pre-history part; derivatives vanish
  CHECK(v.v2.back() == doctest::Approx(0.2));
  CHECK(v.v4.back() == doctest::Approx(0.0));
  CHECK(max_relative_increase(v, 0.0) <= 1e-12);
}

TEST_CASE("too short a trace is rejected") {
  CHECK_THROWS_AS(evaluate_lk_functional(constant_trace(Vector::Ones(2), 2), identity_certificate(2), pin_only(0.0)), ValidationError);
}
