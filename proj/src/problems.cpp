#include "nsdm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "nsdm/linalg.hpp"

namespace nsdm {

namespace {

// Descent-bound modulus for nonsmooth convex entries: with the diagnostic
// step epsilon = 0.1, (3/2) L epsilon must dominate every subgradient norm
// on the level set, since the subdifferential map itself is not Lipschitz
// across kinks.
constexpr double kProbeEpsilonDefault = 0.1;

double descent_bound_modulus(double smooth_lipschitz, double subgrad_bound) {
  return smooth_lipschitz + 1.1 * subgrad_bound / (1.5 * kProbeEpsilonDefault);
}

}  // namespace

ProblemSpec make_l2_quadratic(const Vector& y) {
  const std::size_t d = y.dim();
  auto oracle = std::make_shared<ConvexQuadraticOracle>(
      "l2_quadratic", Matrix::identity(d), y, 3.0);
  ProblemSpec spec{
      .id = "l2_quadratic_d" + std::to_string(d),
      .oracle = oracle,
      .x0 = Vector::zeros(d),
      .declared_constants = {},
      .known_minimizer = y,
      .known_min_value = 3.0 - 0.5 * dot(y, y),
      .convex = true,
      .bounded_level_set = true,
  };
  spec.declared_constants["L"] = 1.0;
  spec.declared_constants["m"] = 1.0;
  spec.declared_constants["M"] = 1.0;
  spec.declared_constants["delta"] = 1.0;
  // level set is the ball B(y, ||y||), contained in B(x0, 2||y||)
  spec.declared_constants["R"] = 2.0 * norm(y) + 1e-9;
  return spec;
}

ProblemSpec make_l2_quadratic(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<double> y(dim);
  for (double& e : y) e = unif(rng);
  ProblemSpec spec = make_l2_quadratic(Vector(std::move(y)));
  spec.id += "_s" + std::to_string(seed);
  return spec;
}

ProblemSpec make_strictly_convex_quadratic(Matrix A, Vector b, double c, Vector x0) {
  auto oracle = std::make_shared<ConvexQuadraticOracle>(
      "strictly_convex_quadratic", std::move(A), std::move(b), c);
  const Vector minimizer = cg_solve(oracle->matrix(), oracle->linear_term(), 1e-12);
  const EigenBounds eig = symmetric_eigen_bounds(oracle->matrix());
  if (!(eig.lambda_min > 0.0)) {
    throw SingularMatrixError("strictly convex quadratic: matrix is not positive definite");
  }
  const double f_min = oracle->eval(minimizer);
  const double f0 = oracle->eval(x0);

  ProblemSpec spec{
      .id = "strictly_convex_quadratic",
      .oracle = oracle,
      .x0 = std::move(x0),
      .declared_constants = {},
      .known_minimizer = minimizer,
      .known_min_value = f_min,
      .convex = true,
      .bounded_level_set = true,
  };
  spec.declared_constants["m"] = eig.lambda_min;
  spec.declared_constants["M"] = eig.lambda_max;
  spec.declared_constants["L"] = eig.lambda_max;
  spec.declared_constants["delta"] = 1.0;
  const double spread = std::sqrt(std::max(0.0, 2.0 * (f0 - f_min) / eig.lambda_min));
  spec.declared_constants["R"] =
      spread + norm(subtract(spec.x0, minimizer)) + 1e-9;
  return spec;
}

ProblemSpec make_max_affine(std::vector<MaxAffineOracle::Piece> pieces,
                            double quadratic_weight, Vector x0) {
  auto oracle = std::make_shared<MaxAffineOracle>("max_affine", std::move(pieces),
                                                  quadratic_weight);
  const double w = oracle->quadratic_weight();
  const double f0 = oracle->eval(x0);

  ProblemSpec spec{
      .id = "max_affine",
      .oracle = oracle,
      .x0 = std::move(x0),
      .declared_constants = {},
      .known_minimizer = std::nullopt,
      .known_min_value = std::nullopt,
      .convex = true,
      .bounded_level_set = false,
  };

  double max_a = 0.0;
  for (const auto& p : oracle->pieces()) max_a = std::max(max_a, norm(p.a));

  if (oracle->pieces().size() == 1 && w > 0.0) {
    // smooth case: complete the square
    const auto& p = oracle->pieces().front();
    spec.known_minimizer = scale(-1.0 / w, p.a);
    spec.known_min_value = p.b - 0.5 * dot(p.a, p.a) / w;
  }

  if (w > 0.0) {
    // f(x) >= <a_0, x> + b_0 + (w/2)||x||^2 bounds the level set about 0.
    const auto& p0 = oracle->pieces().front();
    const double na = norm(p0.a);
    const double r0 = (na + std::sqrt(na * na + 2.0 * w * std::max(0.0, f0 - p0.b))) / w;
    spec.bounded_level_set = true;
    spec.declared_constants["R"] = r0 + norm(spec.x0) + 1e-9;
    spec.declared_constants["L"] = descent_bound_modulus(w, max_a + w * r0);
    spec.declared_constants["delta"] = 1.0;
  } else {
    spec.declared_constants["L"] = descent_bound_modulus(0.0, max_a);
  }
  return spec;
}

ProblemSpec make_l1_composite(double lambda, Matrix A, Vector b, Vector x0) {
  auto oracle = std::make_shared<L1CompositeOracle>("l1_composite", lambda, std::move(A),
                                                    std::move(b));
  const std::size_t d = oracle->dim();
  const double f0 = oracle->eval(x0);

  ProblemSpec spec{
      .id = "l1_composite",
      .oracle = oracle,
      .x0 = std::move(x0),
      .declared_constants = {},
      .known_minimizer = std::nullopt,
      .known_min_value = std::nullopt,
      .convex = true,
      .bounded_level_set = false,
  };

  if (oracle->matrix().is_diagonal()) {
    // coordinatewise soft threshold
    std::vector<double> xm(d);
    bool positive_definite = true;
    for (std::size_t i = 0; i < d; ++i) {
      const double aii = oracle->matrix().at(i, i);
      if (!(aii > 0.0)) {
        positive_definite = false;
        break;
      }
      const double bi = oracle->linear_term()[i];
      const double mag = std::max(std::abs(bi) - lambda, 0.0);
      xm[i] = (bi >= 0.0 ? 1.0 : -1.0) * mag / aii;
    }
    if (positive_definite) {
      Vector minimizer(std::move(xm));
      spec.known_min_value = oracle->eval(minimizer);
      spec.known_minimizer = std::move(minimizer);
    }
  }

  const EigenBounds eig = symmetric_eigen_bounds(oracle->matrix());
  spec.declared_constants["m"] = eig.lambda_min;
  spec.declared_constants["M"] = eig.lambda_max;
  spec.declared_constants["delta"] = 1.0;
  if (eig.lambda_min > 1e-12) {
    const double nb = norm(oracle->linear_term());
    const double r0 =
        (nb + std::sqrt(nb * nb + 2.0 * eig.lambda_min * std::max(0.0, f0))) /
        eig.lambda_min;
    spec.bounded_level_set = true;
    spec.declared_constants["R"] = r0 + norm(spec.x0) + 1e-9;
    const double subgrad_bound =
        lambda * std::sqrt(static_cast<double>(d)) + eig.lambda_max * r0 + nb;
    spec.declared_constants["L"] = descent_bound_modulus(eig.lambda_max, subgrad_bound);
  }
  return spec;
}

ProblemSpec make_smooth_nonconvex(const std::string& id, Vector x0) {
  if (id != "rosenbrock") {
    throw ConfigError("make_smooth_nonconvex: unknown objective '" + id + "'");
  }
  if (x0.dim() != 2) {
    throw DimensionError("rosenbrock: start point must be two-dimensional");
  }
  auto f = [](const Vector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  auto g = [](const Vector& x) {
    const double b = x[1] - x[0] * x[0];
    return Vector{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
  };
  auto oracle = std::make_shared<SmoothOracle>("rosenbrock", 2, f, g, /*convex=*/false);
  ProblemSpec spec{
      .id = "rosenbrock",
      .oracle = oracle,
      .x0 = std::move(x0),
      .declared_constants = {},
      .known_minimizer = Vector{1.0, 1.0},
      .known_min_value = 0.0,
      .convex = false,
      .bounded_level_set = false,
  };
  return spec;
}

std::vector<ProblemSpec> default_corpus() {
  std::vector<ProblemSpec> corpus;

  for (std::size_t dim : {1u, 3u, 10u, 100u}) {
    ProblemSpec spec = make_l2_quadratic(dim, 7);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", dim);
    spec.id = "l2_quadratic_d" + std::string(buf);
    corpus.push_back(std::move(spec));
  }

  {
    ProblemSpec spec = make_strictly_convex_quadratic(
        Matrix::diagonal({1.0, 4.0}), Vector::zeros(2), 0.0, Vector{2.0, 1.0});
    spec.id = "quadratic_diag14";
    corpus.push_back(std::move(spec));
  }
  {
    ProblemSpec spec = make_strictly_convex_quadratic(
        Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}}), Vector{3.0, 3.0}, 0.0,
        Vector{4.0, -1.0});
    spec.id = "quadratic_sym2";
    corpus.push_back(std::move(spec));
  }
  {
    ProblemSpec spec = make_max_affine(
        {{Vector{1.0}, 0.0}, {Vector{-1.0}, 0.0}}, 0.0, Vector{2.0});
    spec.id = "abs1d";
    spec.known_minimizer = Vector{0.0};
    spec.known_min_value = 0.0;
    spec.bounded_level_set = true;  // level set {|x| <= f(x0)}
    spec.declared_constants["R"] = 2.0 * std::abs(2.0) + 1e-9;
    corpus.push_back(std::move(spec));
  }
  {
    ProblemSpec spec = make_max_affine(
        {{Vector{1.0, 0.0}, 0.0}, {Vector{0.0, 1.0}, 0.0}, {Vector{-1.0, -1.0}, 0.0}},
        1.0, Vector{1.0, 1.0});
    spec.id = "max_affine_simplex";
    // zero lies in the hull of the piece gradients, so the origin is optimal
    spec.known_minimizer = Vector{0.0, 0.0};
    spec.known_min_value = 0.0;
    corpus.push_back(std::move(spec));
  }
  {
    ProblemSpec spec = make_l1_composite(1.0, Matrix::identity(1), Vector{2.0}, Vector{0.0});
    spec.id = "l1_soft1d";
    corpus.push_back(std::move(spec));
  }
  {
    // |b| <= lambda puts the minimizer on the kink itself
    ProblemSpec spec =
        make_l1_composite(1.0, Matrix::identity(1), Vector{0.5}, Vector{2.0});
    spec.id = "l1_soft1d_sub";
    corpus.push_back(std::move(spec));
  }
  {
    ProblemSpec spec = make_l1_composite(0.5, Matrix::diagonal({1.0, 1.0}),
                                         Vector{2.0, -2.0}, Vector{0.0, 0.0});
    spec.id = "l1_soft2d";
    corpus.push_back(std::move(spec));
  }
  corpus.push_back(make_smooth_nonconvex("rosenbrock", Vector{-1.2, 1.0}));

  std::sort(corpus.begin(), corpus.end(),
            [](const ProblemSpec& a, const ProblemSpec& b) { return a.id < b.id; });
  return corpus;
}

Vector random_start(const ProblemSpec& spec, std::uint64_t seed) {
  // FNV-1a over the id keeps starts distinct across problems for equal seeds.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : spec.id) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::mt19937_64 rng(h ^ (seed + 0x9e3779b97f4a7c15ull));
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::vector<double> x(spec.oracle->dim());
  for (double& e : x) e = unif(rng);
  return Vector(std::move(x));
}

}  // namespace nsdm
