#include "nsdm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace nsdm {

Matrix::Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
  if (n == 0) {
    throw DimensionError("Matrix: dimension must be at least 1");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw DimensionError("Matrix::from_rows: matrix must be square");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!std::isfinite(rows[i][j])) {
        throw NonFiniteError("Matrix::from_rows: entries must be finite");
      }
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    }
  }
  return true;
}

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j && at(i, j) != 0.0) return false;
    }
  }
  return true;
}

Vector Matrix::apply(const Vector& x) const {
  if (x.dim() != n_) {
    throw DimensionError("Matrix::apply: dimension mismatch");
  }
  std::vector<double> out(n_, 0.0);
  if (is_diagonal()) {
    for (std::size_t i = 0; i < n_; ++i) out[i] = at(i, i) * x[i];
    return Vector(std::move(out));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += at(i, j) * x[j];
    out[i] = s;
  }
  return Vector(std::move(out));
}

Vector cg_solve(const Matrix& A, const Vector& b, double tol_residual,
                std::size_t max_iters) {
  const std::size_t n = A.dim();
  if (b.dim() != n) {
    throw DimensionError("cg_solve: dimension mismatch");
  }
  if (max_iters == 0) max_iters = 10 * n + 50;
  const double target = tol_residual * std::max(1.0, norm(b));

  Vector x = Vector::zeros(n);
  Vector r = b;  // b - A*0
  Vector p = r;
  double rr = dot(r, r);
  if (std::sqrt(rr) <= target) return x;

  for (std::size_t k = 0; k < max_iters; ++k) {
    const Vector Ap = A.apply(p);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) {
      throw SingularMatrixError("cg_solve: matrix is not positive definite");
    }
    const double alpha = rr / pAp;
    x = axpy(alpha, p, x);
    r = axpy(-alpha, Ap, r);
    const double rr_new = dot(r, r);
    if (std::sqrt(rr_new) <= target) return x;
    p = axpy(rr_new / rr, p, r);
    rr = rr_new;
  }
  throw SingularMatrixError("cg_solve: no convergence within iteration budget");
}

namespace {

struct PowerResult {
  double lambda = 0.0;
  Vector vec;
};

// Largest eigenvalue of a symmetric positive-semidefinite operator
// x -> A x + shift x, returned together with the final iterate.
PowerResult power_iteration_shifted(const Matrix& A, double shift,
                                    std::mt19937_64& rng) {
  const std::size_t n = A.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> init(n);
  for (double& e : init) e = gauss(rng);
  Vector x(std::move(init));
  if (norm(x) == 0.0) x = Vector::unit(n, 0);
  x = normalized(x);

  double lambda = 0.0;
  for (int k = 0; k < 20000; ++k) {
    Vector y = axpy(shift, x, A.apply(x));
    const double rayleigh = dot(x, y);
    const double ny = norm(y);
    if (ny == 0.0) {
      // A + shift I annihilates x: eigenvalue 0 with eigenvector x.
      return {0.0, x};
    }
    x = normalized(y);
    if (k > 0 && std::abs(rayleigh - lambda) <= 1e-15 * (1.0 + std::abs(rayleigh))) {
      return {rayleigh, x};
    }
    lambda = rayleigh;
  }
  return {lambda, x};
}

}  // namespace

EigenBounds symmetric_eigen_bounds(const Matrix& A, std::uint64_t seed) {
  const std::size_t n = A.dim();
  // Gershgorin bound on the spectral radius keeps both shifted operators PSD.
  double gersh = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(A.at(i, j));
    gersh = std::max(gersh, row);
  }

  std::mt19937_64 rng(seed);
  const PowerResult top = power_iteration_shifted(A, gersh, rng);
  const double lambda_max = top.lambda - gersh;

  // sigma I - A is PSD for sigma = lambda_max + 1; its top eigenvalue is
  // sigma - lambda_min.
  const double sigma = lambda_max + 1.0;
  Matrix neg(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) neg.set(i, j, -A.at(i, j));
  }
  const PowerResult bottom = power_iteration_shifted(neg, sigma, rng);
  const double lambda_min = sigma - bottom.lambda;

  EigenBounds out{lambda_min, lambda_max, bottom.vec, top.vec};
  return out;
}

}  // namespace nsdm
