#pragma once

#include <span>

#include <Eigen/Dense>

namespace lfc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;  // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Iterates until the off-diagonal Frobenius norm
/// drops below `tolerance` times the Frobenius norm of the input.
/// Only the lower triangle is read when the input is not exactly symmetric.
SymmetricEigen jacobi_eigen(const Matrix& a, double tolerance = 1e-12, int max_sweeps = 100);

double lambda_max(const Matrix& symmetric);
double lambda_min(const Matrix& symmetric);

/// max |a_ij - a_ji|
double asymmetry(const Matrix& a);
Matrix symmetrize(const Matrix& a);

/// Largest real part over the (complex) spectrum of a general square matrix.
double spectral_abscissa(const Matrix& a);
inline bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }

/// Companion matrix with super-diagonal ones and last row -c_1 .. -c_n.
Matrix companion_matrix(std::span<const double> coefficients);

/// Solves F'P + PF = rhs for P (Kronecker formulation; fine for the
/// dimensions used here).
Matrix solve_lyapunov(const Matrix& f, const Matrix& rhs);

/// Nearest positive semidefinite matrix in Frobenius norm.
Matrix project_psd(const Matrix& symmetric);

/// max |a_ij|
double max_abs_entry(const Matrix& a);

}  // namespace lfc
