#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lfc/linalg.hpp"

namespace lfc {

/// Orthonormal coordinates for d x d symmetric matrices: E_ii and
/// (E_ij + E_ji)/sqrt(2), i < j, in row-major order.
class SymmetricBasis {
 public:
  explicit SymmetricBasis(int dimension);

  int dimension() const { return d_; }
  int size() const { return d_ * (d_ + 1) / 2; }
  Matrix element(int a) const;
  Matrix to_matrix(const Vector& coords) const;
  Vector to_coords(const Matrix& symmetric) const;

 private:
  int d_;
  std::vector<std::pair<int, int>> index_;
};

/// One block constraint  C + sum_a x_a G_a - t [margin] I  >= 0.
struct MatrixConstraint {
  Matrix constant;
  std::vector<std::pair<int, Matrix>> terms;  // (variable index, G_a), nonzero G only
  bool margin = true;                          // whether the common margin t enters

  Eigen::Index size() const { return constant.rows(); }
  Matrix evaluate(const Vector& x) const;
};

struct AffineMatrixSystem {
  int variables = 0;
  std::vector<MatrixConstraint> constraints;

  /// max t such that every constraint holds at x (minimum over blocks of
  /// the smallest eigenvalue; blocks without margin must be PSD or -inf).
  double margin_at(const Vector& x) const;
};

struct BarrierOptions {
  double target = 0.0;           // margin that counts as feasible
  double stop_margin = 1e300;    // return as soon as the margin reaches this
  double gap_tolerance = 1e-3;   // relative duality-gap bound on the optimum
  int max_newton = 400;
  double growth = 8.0;           // barrier weight multiplier per centring
};

struct SdpResult {
  bool feasible = false;
  Vector x;
  double margin = 0.0;           // achieved t
  double upper_bound = 0.0;      // bound on the optimal t from the central path
  int iterations = 0;
  std::string reason;
};

/// Maximizes the common margin t by a primal log-det barrier method with
/// damped Newton centring. `x0` must satisfy the margin-free blocks
/// strictly. Declares infeasible once the central-path bound on the
/// optimum falls below `target`.
SdpResult maximize_margin(const AffineMatrixSystem& system, const Vector& x0, const BarrierOptions& options);

struct ProjectionOptions {
  double target = 0.0;   // margin that counts as feasible; the cone step aims at twice this
  int budget = 5000;
  double relaxation = 1.5;
  double stagnation = 1e-12;
};

/// Alternating projections between the affine graph { (x, Z) : Z_k =
/// C_k + G_k(x) - 2 target I } and the product of PSD cones, with
/// over-relaxation on the cone step.
SdpResult alternating_projections(const AffineMatrixSystem& system, const Vector& x0, const ProjectionOptions& options);

}  // namespace lfc
