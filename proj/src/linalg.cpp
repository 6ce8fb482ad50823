#include "lfc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace lfc {

SymmetricEigen jacobi_eigen(const Matrix& input, double tolerance, int max_sweeps) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const Eigen::Index n = input.rows();
  Matrix a = input.selfadjointView<Eigen::Lower>();
  Matrix v = Matrix::Identity(n, n);

  const double total = a.norm();
  const double threshold = tolerance * std::max(total, std::numeric_limits<double>::min());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's rotation: t = tan(phi) chosen as the smaller root.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

double lambda_max(const Matrix& symmetric) {
  if (symmetric.size() == 0) throw std::invalid_argument("lambda_max: empty matrix");
  return jacobi_eigen(symmetric).values.maxCoeff();
}

double lambda_min(const Matrix& symmetric) {
  if (symmetric.size() == 0) throw std::invalid_argument("lambda_min: empty matrix");
  return jacobi_eigen(symmetric).values.minCoeff();
}

double asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double spectral_abscissa(const Matrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) throw std::invalid_argument("spectral_abscissa: need a square matrix");
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_abscissa: eigenvalue iteration failed");
  return solver.eigenvalues().real().maxCoeff();
}

Matrix companion_matrix(std::span<const double> coefficients) {
  const auto n = static_cast<Eigen::Index>(coefficients.size());
  if (n == 0) throw std::invalid_argument("companion_matrix: empty coefficient list");
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) c(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) c(n - 1, j) = -coefficients[static_cast<size_t>(j)];
  return c;
}

Matrix solve_lyapunov(const Matrix& f, const Matrix& rhs) {
  const Eigen::Index n = f.rows();
  // vec(F'P + PF) = (I kron F' + F' kron I) vec(P)
  const Matrix ft = f.transpose();
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.block(i * n, i * n, n, n) += ft;
    for (Eigen::Index j = 0; j < n; ++j) k.block(i * n, j * n, n, n).diagonal().array() += ft(i, j);
  }
  const Vector vec_rhs = Eigen::Map<const Vector>(rhs.data(), n * n);
  const Vector vec_p = k.partialPivLu().solve(vec_rhs);
  Matrix p = Eigen::Map<const Matrix>(vec_p.data(), n, n);
  return symmetrize(p);
}

Matrix project_psd(const Matrix& symmetric) {
  const SymmetricEigen e = jacobi_eigen(symmetric);
  const Vector clipped = e.values.cwiseMax(0.0);
  return e.vectors * clipped.asDiagonal() * e.vectors.transpose();
}

double max_abs_entry(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace lfc
