#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "nsdm/core.hpp"
#include "nsdm/oracle.hpp"

namespace nsdm {

/// Deterministic sampling recipe: same seed, same draws, same Certificate.
/// The center is optional because several checks name their own base point
/// explicitly and use only the radius, count, and seed.
struct SamplingPlan {
  double radius = 1.0;
  std::size_t num_points = 2000;
  std::uint64_t seed = 42;
  std::optional<Vector> center;

  void validate() const;
};

/// Tests the proximal-subgradient inequality
///   f(y) >= f(x) + <zeta, y - x> - (r/2) ||y - x||^2
/// on points y sampled uniformly in B(x, plan.radius), with a relative slack
/// scaled by 1 + |f(x)|.
Certificate check_prox_subgradient(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& zeta, double r, const SamplingPlan& plan);

/// Tests the uniform lower quadratic estimate
///   f(y') >= f(y) + <w, y' - y> - (L/2) ||y' - y||^2
/// on pairs y, y' sampled in B(region_center, delta), where w is the MinNorm
/// subgradient at y.
Certificate check_prox_regularity(const ObjectiveOracle& oracle, const Vector& region_center,
                                  double delta, double L, const SamplingPlan& plan);

/// Tests the subdifferential Lipschitz inclusion: every descriptor generator
/// g at a level-set sample y must be within L ||y - z|| of the descriptor at
/// a nearby sampled z. Distances to descriptors are exact for singletons and
/// box products; for finite hulls the min-norm-point solver supplies the
/// distance to its tolerance.
Certificate check_subdiff_lipschitz(const ObjectiveOracle& oracle,
                                    const std::vector<Vector>& omega_samples, double delta,
                                    double L, const SamplingPlan& plan);

/// Verifies m <= lambda_min(A) and lambda_max(A) <= M for a quadratic
/// oracle's matrix, via randomized Rayleigh probes plus power-iteration
/// estimates of both extremal eigenvalues.
Certificate check_hessian_bounds(const ObjectiveOracle& oracle, double m, double M,
                                 std::uint64_t seed = 42);

/// Central differences per coordinate against the Singleton descriptor.
/// Throws NotSmoothAtError when the descriptor at x is not a singleton.
Certificate finite_difference_gradient_check(const ObjectiveOracle& oracle, const Vector& x,
                                             double h);

/// Rejection-samples `count` points with f(y) <= f(x0) from the ball
/// B(x0, radius); x0 itself is always included first.
std::vector<Vector> sample_level_set(const ObjectiveOracle& oracle, const Vector& x0,
                                     double radius, std::size_t count, std::uint64_t seed);

/// One draw uniform in the closed ball B(center, radius); advances rng.
class BallSampler {
 public:
  explicit BallSampler(std::uint64_t seed);
  Vector draw(const Vector& center, double radius);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace nsdm
