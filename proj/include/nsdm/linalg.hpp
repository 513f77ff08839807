#pragma once

#include <cstdint>
#include <vector>

#include "nsdm/core.hpp"

namespace nsdm {

/// Dense square matrix, row-major. Only what quadratic oracles and the
/// hypothesis checkers need: storage, matvec, and a symmetry test.
class Matrix {
 public:
  explicit Matrix(std::size_t n);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) { data_[i * n_ + j] = v; }

  bool is_symmetric(double tol = 0.0) const;
  bool is_diagonal() const;

  Vector apply(const Vector& x) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Solves A x = b for symmetric positive-definite A by conjugate gradients,
/// to ||A x - b|| <= tol_residual * max(1, ||b||). Throws SingularMatrixError
/// when the iteration breaks down or fails to converge.
Vector cg_solve(const Matrix& A, const Vector& b, double tol_residual = 1e-12,
                std::size_t max_iters = 0);

struct EigenBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Vector vec_min;
  Vector vec_max;
};

/// Extremal eigenvalue estimates for symmetric A. lambda_max comes from power
/// iteration on A shifted positive semidefinite by its Gershgorin bound;
/// lambda_min from shifted power iteration on (sigma I - A) with
/// sigma = lambda_max estimate + 1, which avoids any linear solve.
EigenBounds symmetric_eigen_bounds(const Matrix& A, std::uint64_t seed = 42);

}  // namespace nsdm
