#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsdm/core.hpp"
#include "nsdm/oracle.hpp"

namespace nsdm {

/// One corpus entry: an oracle, the start point, the constants the problem
/// declares where known (keys among "L", "m", "M", "delta", "R"), and the
/// closed-form optimum when the family has one. Constructed in code with
/// fixed seeds so runs are reproducible bit for bit.
struct ProblemSpec {
  std::string id;
  std::shared_ptr<const ObjectiveOracle> oracle;
  Vector x0;
  std::map<std::string, double> declared_constants;
  std::optional<Vector> known_minimizer;
  std::optional<double> known_min_value;
  bool convex = false;
  bool bounded_level_set = false;  // tagged bounded-Omega; "R" is declared when set
};

/// f(x) = 1/2 ||x||^2 - <x, y> + 3 from x0 = 0: the finite truncation of the
/// sequence-space family. The subgradient is x - y, the minimizer y, and the
/// subdifferential map is 1-Lipschitz, so L = 1 is declared.
ProblemSpec make_l2_quadratic(const Vector& y);

/// Same family with y drawn componentwise uniform in [-2, 2] from the seed.
ProblemSpec make_l2_quadratic(std::size_t dim, std::uint64_t seed);

/// f(x) = 1/2 x^T A x - <b, x> + c for symmetric positive-definite A. The
/// minimizer solves A x = b (conjugate gradients at construction); m and M
/// come from power-iteration eigenvalue estimates and L = M is declared.
ProblemSpec make_strictly_convex_quadratic(Matrix A, Vector b, double c, Vector x0);

/// f(x) = max_i (<a_i, x> + b_i) + (w/2) ||x||^2.
ProblemSpec make_max_affine(std::vector<MaxAffineOracle::Piece> pieces,
                            double quadratic_weight, Vector x0);

/// f(x) = lambda ||x||_1 + 1/2 x^T A x - <b, x> for positive-semidefinite A.
/// For diagonal A the coordinatewise soft-threshold minimizer is declared.
ProblemSpec make_l1_composite(double lambda, Matrix A, Vector b, Vector x0);

/// Smooth nonconvex test objectives; currently id == "rosenbrock" on R^2,
/// stationary point (1, 1).
ProblemSpec make_smooth_nonconvex(const std::string& id, Vector x0);

/// The built-in corpus, ids unique and lexicographically ordered.
std::vector<ProblemSpec> default_corpus();

/// Deterministic alternative start: components uniform in [-3, 3], seeded by
/// `seed` mixed with the problem id.
Vector random_start(const ProblemSpec& spec, std::uint64_t seed);

}  // namespace nsdm
