#include <doctest.h>

#include "helpers.hpp"
#include "lfc/sdp.hpp"

using namespace lfc;

TEST_CASE("symmetric basis is orthonormal and round-trips") {
  const SymmetricBasis basis(4);
  CHECK(basis.size() == 10);
  for (int a = 0; a < basis.size(); ++a)
    for (int b = 0; b < basis.size(); ++b) {
      const double ip = (basis.element(a).array() * basis.element(b).array()).sum();
      CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0));
    }
  Rng rng(21);
  const Matrix s = test::random_symmetric(rng, 4);
  CHECK((basis.to_matrix(basis.to_coords(s)) - s).cwiseAbs().maxCoeff() < 1e-14);
}

namespace {

// maximize t subject to diag(1 - x, 1 + x) - t I >= 0 and x in [-5, 5]
AffineMatrixSystem scalar_problem() {
  AffineMatrixSystem sys;
  sys.variables = 1;
  MatrixConstraint c;
  c.constant = Matrix::Identity(2, 2);
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = -1.0;
  g(1, 1) = 1.0;
  c.terms.emplace_back(0, g);
  sys.constraints.push_back(c);
  MatrixConstraint box;
  box.constant = 5.0 * Matrix::Identity(2, 2);
  box.terms.emplace_back(0, g);
  box.margin = false;
  sys.constraints.push_back(box);
  return sys;
}

}  // namespace

TEST_CASE("barrier method finds the optimal margin of a small problem") {
  const AffineMatrixSystem sys = scalar_problem();
  BarrierOptions opt;
  opt.target = 0.5;
  opt.gap_tolerance = 1e-6;
  const SdpResult r = maximize_margin(sys, Vector::Constant(1, 3.0), opt);
  CHECK(r.feasible);
  CHECK(r.margin == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(r.x(0)) < 1e-3);
  CHECK(sys.margin_at(r.x) == doctest::Approx(r.margin));
}

TEST_CASE("barrier method reports infeasibility against a high target") {
  BarrierOptions opt;
  opt.target = 1.5;
  const SdpResult r = maximize_margin(scalar_problem(), Vector::Zero(1), opt);
  CHECK_FALSE(r.feasible);
  CHECK(r.upper_bound < 1.5);
}

TEST_CASE("alternating projections on an easy problem") {
  ProjectionOptions opt;
  opt.target = 0.1;
  const SdpResult r = alternating_projections(scalar_problem(), Vector::Constant(1, 4.0), opt);
  CHECK(r.feasible);
  CHECK(scalar_problem().margin_at(r.x) >= 0.1 - 1e-9);
}
