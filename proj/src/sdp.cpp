#include "lfc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfc/error.hpp"

namespace lfc {

SymmetricBasis::SymmetricBasis(int dimension) : d_(dimension) {
  if (dimension <= 0) throw ValidationError("symmetric basis needs a positive dimension");
  for (int i = 0; i < d_; ++i)
    for (int j = i; j < d_; ++j) index_.emplace_back(i, j);
}

Matrix SymmetricBasis::element(int a) const {
  Matrix e = Matrix::Zero(d_, d_);
  const auto [i, j] = index_.at(static_cast<std::size_t>(a));
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
  }
  return e;
}

Matrix SymmetricBasis::to_matrix(const Vector& coords) const {
  Matrix m(d_, d_);
  for (std::size_t a = 0; a < index_.size(); ++a) {
    const auto [i, j] = index_[a];
    if (i == j) {
      m(i, i) = coords(static_cast<Eigen::Index>(a));
    } else {
      m(i, j) = m(j, i) = coords(static_cast<Eigen::Index>(a)) / std::sqrt(2.0);
    }
  }
  return m;
}

Vector SymmetricBasis::to_coords(const Matrix& s) const {
  Vector c(size());
  for (std::size_t a = 0; a < index_.size(); ++a) {
    const auto [i, j] = index_[a];
    c(static_cast<Eigen::Index>(a)) = i == j ? s(i, i) : (s(i, j) + s(j, i)) / std::sqrt(2.0);
  }
  return c;
}

Matrix MatrixConstraint::evaluate(const Vector& x) const {
  Matrix s = constant;
  for (const auto& [a, g] : terms) s.noalias() += x(a) * g;
  return s;
}

double AffineMatrixSystem::margin_at(const Vector& x) const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) {
    const double lo = lambda_min(c.evaluate(x));
    if (c.margin) {
      t = std::min(t, lo);
    } else if (lo <= 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier objective -eta t - sum log det S_k; +inf outside the domain.
double barrier_value(const AffineMatrixSystem& sys, const Vector& x, double t, double eta) {
  double f = -eta * t;
  for (const auto& c : sys.constraints) {
    Matrix s = c.evaluate(x);
    if (c.margin) s.diagonal().array() -= t;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return kInf;
    const Vector d = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!(d(i) > 0.0)) return kInf;
      f -= 2.0 * std::log(d(i));
    }
  }
  return f;
}

// Gradient and Hessian of the barrier part in z = (x, t).
bool barrier_derivatives(const AffineMatrixSystem& sys, const Vector& x, double t, Vector& grad, Matrix& hess) {
  const int nz = sys.variables + 1;
  grad.setZero(nz);
  hess.setZero(nz, nz);
  for (const auto& c : sys.constraints) {
    Matrix s = c.evaluate(x);
    if (c.margin) s.diagonal().array() -= t;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::Index n = s.rows();
    const auto cols = static_cast<Eigen::Index>(c.terms.size()) + (c.margin ? 1 : 0);
    // packed upper triangles, off-diagonals scaled by sqrt(2), so that
    // <Y_a, Y_b> becomes a plain dot product
    const Eigen::Index packed = n * (n + 1) / 2;
    Matrix y(packed, cols);
    Vector traces(cols);
    std::vector<int> index;
    index.reserve(static_cast<std::size_t>(cols));
    Eigen::Index col = 0;
    Matrix w;
    auto whiten = [&](const Matrix& g) {
      w = g;
      llt.matrixL().solveInPlace(w);
      w.transposeInPlace();
      llt.matrixL().solveInPlace(w);
      Eigen::Index r = 0;
      double tr = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        y(r++, col) = w(j, j);
        tr += w(j, j);
        for (Eigen::Index i = j + 1; i < n; ++i) y(r++, col) = std::sqrt(2.0) * w(i, j);
      }
      traces(col) = tr;
      ++col;
    };
    for (const auto& [a, g] : c.terms) {
      whiten(g);
      index.push_back(a);
    }
    if (c.margin) {
      whiten(-Matrix::Identity(n, n));
      index.push_back(sys.variables);
    }
    Matrix local = Matrix::Zero(cols, cols);
    local.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
    local.triangularView<Eigen::StrictlyUpper>() = local.transpose();
    for (Eigen::Index p = 0; p < cols; ++p) {
      grad(index[static_cast<std::size_t>(p)]) -= traces(p);
      for (Eigen::Index q = 0; q < cols; ++q)
        hess(index[static_cast<std::size_t>(p)], index[static_cast<std::size_t>(q)]) += local(p, q);
    }
  }
  return true;
}

}  // namespace

SdpResult maximize_margin(const AffineMatrixSystem& sys, const Vector& x0, const BarrierOptions& opt) {
  SdpResult out;
  if (x0.size() != sys.variables) throw ValidationError("barrier start has the wrong number of variables");
  const double m0 = sys.margin_at(x0);
  if (!std::isfinite(m0)) {
    out.reason = "start point violates a margin-free constraint";
    out.x = x0;
    out.margin = -kInf;
    return out;
  }

  double nu = 0.0;
  for (const auto& c : sys.constraints) nu += static_cast<double>(c.size());

  Vector x = x0;
  double t = m0 - 0.1 * std::max(std::abs(m0), 1e-4);
  double eta = nu / std::max(std::abs(m0), 1e-6);
  const int nz = sys.variables + 1;
  Vector grad(nz), step(nz), z(nz);
  Matrix hess(nz, nz);
  double best_t = sys.margin_at(x);
  Vector best_x = x;

  auto finish = [&](bool feasible, std::string why) {
    out.feasible = feasible;
    out.x = best_x;
    out.margin = best_t;
    out.reason = std::move(why);
    return out;
  };

  while (out.iterations < opt.max_newton) {
    // centring at the current eta
    for (int inner = 0; inner < 60 && out.iterations < opt.max_newton; ++inner) {
      ++out.iterations;
      if (!barrier_derivatives(sys, x, t, grad, hess)) return finish(best_t >= opt.target, "lost strict feasibility");
      grad(nz - 1) -= eta;
      hess.diagonal().array() += 1e-14 * (1.0 + hess.diagonal().array().abs());
      Eigen::LDLT<Matrix> ldlt(hess);
      step = -ldlt.solve(grad);
      if (!step.allFinite()) return finish(best_t >= opt.target, "singular Newton system");
      const double decrement = -grad.dot(step);
      if (decrement < 1e-9) break;

      const double f0 = barrier_value(sys, x, t, eta);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Vector xn = x + alpha * step.head(sys.variables);
        const double tn = t + alpha * step(nz - 1);
        const double f1 = barrier_value(sys, xn, tn, eta);
        if (f1 <= f0 - 0.25 * alpha * decrement) {
          x = xn;
          t = tn;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      if (t > best_t) {
        best_t = t;
        best_x = x;
      }
      if (best_t >= opt.stop_margin) {
        best_t = sys.margin_at(best_x);
        out.upper_bound = kInf;
        return finish(best_t >= opt.target, "reached stop margin");
      }
      if (decrement < 1e-7) break;
    }
    const double gap = nu / eta;
    out.upper_bound = t + gap;
    if (out.upper_bound < opt.target) {
      best_t = sys.margin_at(best_x);
      return finish(false, "central-path bound below target margin");
    }
    const double scale = std::max(std::abs(t), std::abs(opt.target));
    if (gap <= opt.gap_tolerance * scale || gap < 1e-300) {
      best_t = sys.margin_at(best_x);
      return finish(best_t >= opt.target, best_t >= opt.target ? "converged" : "converged below target margin");
    }
    eta *= opt.growth;
  }
  best_t = sys.margin_at(best_x);
  return finish(best_t >= opt.target, "Newton budget exhausted");
}

SdpResult alternating_projections(const AffineMatrixSystem& sys, const Vector& x0, const ProjectionOptions& opt) {
  SdpResult out;
  const int nv = sys.variables;
  if (x0.size() != nv) throw ValidationError("projection start has the wrong number of variables");

  // normal equations of the affine projection, factored once
  Matrix normal = Matrix::Identity(nv, nv);
  for (const auto& c : sys.constraints)
    for (const auto& [a, ga] : c.terms)
      for (const auto& [b, gb] : c.terms) normal(a, b) += (ga.array() * gb.array()).sum();
  const Eigen::LLT<Matrix> chol(normal);
  if (chol.info() != Eigen::Success) throw Error("projection normal equations are not positive definite");

  // aim past the target: the iterates approach the shifted cone from outside
  const double aim = opt.target > 0.0 ? 2.0 * opt.target : 1e-12;
  auto shift = [&](const MatrixConstraint& c) { return c.margin ? aim : 0.0; };
  std::vector<Matrix> zc(sys.constraints.size());
  Vector x = x0;
  for (std::size_t k = 0; k < zc.size(); ++k) {
    zc[k] = sys.constraints[k].evaluate(x);
    zc[k].diagonal().array() -= shift(sys.constraints[k]);
  }

  out.margin = sys.margin_at(x);
  out.x = x;
  for (out.iterations = 1; out.iterations <= opt.budget; ++out.iterations) {
    // relaxed cone step
    for (auto& z : zc) z = z + opt.relaxation * (project_psd(symmetrize(z)) - z);
    // affine step
    Vector rhs = x;
    for (std::size_t k = 0; k < zc.size(); ++k) {
      const auto& c = sys.constraints[k];
      Matrix w = zc[k] - c.constant;
      w.diagonal().array() += shift(c);
      for (const auto& [a, g] : c.terms) rhs(a) += (g.array() * w.array()).sum();
    }
    const Vector xn = chol.solve(rhs);
    const double moved = (xn - x).norm();
    x = xn;
    for (std::size_t k = 0; k < zc.size(); ++k) {
      zc[k] = sys.constraints[k].evaluate(x);
      zc[k].diagonal().array() -= shift(sys.constraints[k]);
    }
    const double m = sys.margin_at(x);
    if (m > out.margin) {
      out.margin = m;
      out.x = x;
    }
    if (out.margin >= opt.target) {
      out.feasible = true;
      out.reason = "converged";
      return out;
    }
    if (moved <= opt.stagnation * (1.0 + x.norm())) {
      out.reason = "stagnated";
      return out;
    }
  }
  out.iterations = opt.budget;
  out.reason = "iteration budget exhausted";
  return out;
}

}  // namespace lfc
