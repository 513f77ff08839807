#include "nsdm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "nsdm/linalg.hpp"

namespace nsdm {

void SamplingPlan::validate() const {
  if (!(radius > 0.0)) throw ConfigError("sampling plan: radius must be positive");
  if (num_points == 0) throw ConfigError("sampling plan: num_points must be at least 1");
}

struct BallSampler::Impl {
  std::mt19937_64 rng;
  std::normal_distribution<double> gauss{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};
};

BallSampler::BallSampler(std::uint64_t seed) : impl_(std::make_shared<Impl>()) {
  impl_->rng.seed(seed);
}

Vector BallSampler::draw(const Vector& center, double radius) {
  const std::size_t d = center.dim();
  std::vector<double> dir(d);
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    dir[i] = impl_->gauss(impl_->rng);
    sq += dir[i] * dir[i];
  }
  const double u = impl_->unif(impl_->rng);
  double r = radius * std::pow(u, 1.0 / static_cast<double>(d));
  if (sq == 0.0) {
    r = 0.0;
    sq = 1.0;
  }
  const double s = r / std::sqrt(sq);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = center[i] + s * dir[i];
  return Vector(std::move(out));
}

namespace {

void record_violation(Certificate& cert, Violation v) {
  ++cert.violations_total;
  if (cert.violations.size() < kMaxRecordedViolations) {
    cert.violations.push_back(std::move(v));
  }
}

// Exact distance from g to the set a descriptor represents, up to the
// min-norm-point tolerance in the finite-hull case (the only approximate
// branch).
double distance_to_descriptor(const Vector& g, const SubdifferentialDescriptor& d) {
  switch (d.form()) {
    case SubdifferentialDescriptor::Form::Singleton:
      return norm(subtract(g, d.singleton_value()));
    case SubdifferentialDescriptor::Form::FiniteHull: {
      std::vector<Vector> shifted;
      shifted.reserve(d.generators().size());
      for (const Vector& h : d.generators()) shifted.push_back(subtract(h, g));
      return norm(min_norm_in_hull(shifted));
    }
    case SubdifferentialDescriptor::Form::BoxProduct: {
      const Vector& s = d.smooth_part();
      double sq = 0.0;
      for (std::size_t i = 0; i < g.dim(); ++i) {
        const double lo = s[i] + d.intervals()[i].lo;
        const double hi = s[i] + d.intervals()[i].hi;
        const double excess = std::max({lo - g[i], g[i] - hi, 0.0});
        sq += excess * excess;
      }
      return std::sqrt(sq);
    }
  }
  throw ConfigError("distance_to_descriptor: unknown descriptor form");
}

// Representative elements of a descriptor used as the "every generator"
// side of the Lipschitz inclusion. Boxes contribute their minimum-norm
// element and the two axis-aligned extreme corners.
std::vector<Vector> descriptor_representatives(const SubdifferentialDescriptor& d) {
  switch (d.form()) {
    case SubdifferentialDescriptor::Form::Singleton:
      return {d.singleton_value()};
    case SubdifferentialDescriptor::Form::FiniteHull:
      return d.generators();
    case SubdifferentialDescriptor::Form::BoxProduct: {
      const Vector& s = d.smooth_part();
      std::vector<double> lo(s.dim()), hi(s.dim());
      for (std::size_t i = 0; i < s.dim(); ++i) {
        lo[i] = s[i] + d.intervals()[i].lo;
        hi[i] = s[i] + d.intervals()[i].hi;
      }
      return {select_subgradient(d, SelectionRule::MinNorm), Vector(std::move(lo)),
              Vector(std::move(hi))};
    }
  }
  throw ConfigError("descriptor_representatives: unknown descriptor form");
}

}  // namespace

Certificate check_prox_subgradient(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& zeta, double r, const SamplingPlan& plan) {
  plan.validate();
  if (x.dim() != oracle.dim() || zeta.dim() != oracle.dim()) {
    throw DimensionError("check_prox_subgradient: dimension mismatch");
  }
  if (r < 0.0) throw ConfigError("check_prox_subgradient: r must be nonnegative");

  Certificate cert;
  cert.kind = CertificateKind::ProxSubgradientMembership;
  cert.estimated_constants["r"] = r;
  cert.estimated_constants["radius"] = plan.radius;

  const double f_x = oracle.eval(x);
  const double slack = 1e-10 * (1.0 + std::abs(f_x));
  BallSampler sampler(plan.seed);
  double min_residual = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < plan.num_points; ++i) {
    const Vector y = sampler.draw(x, plan.radius);
    const Vector step = subtract(y, x);
    const double residual =
        oracle.eval(y) - f_x - dot(zeta, step) + 0.5 * r * dot(step, step);
    ++cert.samples_tested;
    min_residual = std::min(min_residual, residual);
    if (residual < -slack) {
      Violation v;
      v.witness.push_back({"y", y});
      v.witness.push_back({"x", x});
      v.witness.push_back({"zeta", zeta});
      v.lhs = oracle.eval(y);
      v.rhs = f_x + dot(zeta, step) - 0.5 * r * dot(step, step);
      v.gap = residual;
      v.note = "proximal subgradient inequality violated";
      record_violation(cert, std::move(v));
    }
  }
  cert.estimated_constants["min_residual"] = min_residual;
  cert.passed = cert.violations_total == 0;
  return cert;
}

Certificate check_prox_regularity(const ObjectiveOracle& oracle, const Vector& region_center,
                                  double delta, double L, const SamplingPlan& plan) {
  plan.validate();
  if (region_center.dim() != oracle.dim()) {
    throw DimensionError("check_prox_regularity: dimension mismatch");
  }
  if (!(delta > 0.0)) throw ConfigError("check_prox_regularity: delta must be positive");
  if (!(L > 0.0)) throw ConfigError("check_prox_regularity: L must be positive");

  Certificate cert;
  cert.kind = CertificateKind::ProxRegularity;
  cert.estimated_constants["L"] = L;
  cert.estimated_constants["delta"] = delta;

  BallSampler sampler(plan.seed);
  double min_residual = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < plan.num_points; ++i) {
    const Vector y = sampler.draw(region_center, delta);
    const Vector yp = sampler.draw(region_center, delta);
    const Vector w = select_subgradient(oracle.prox_subdifferential(y), SelectionRule::MinNorm);
    const Vector step = subtract(yp, y);
    const double f_y = oracle.eval(y);
    const double residual =
        oracle.eval(yp) - f_y - dot(w, step) + 0.5 * L * dot(step, step);
    ++cert.samples_tested;
    min_residual = std::min(min_residual, residual);
    if (residual < -1e-10 * (1.0 + std::abs(f_y))) {
      Violation v;
      v.witness.push_back({"y", y});
      v.witness.push_back({"y_prime", yp});
      v.witness.push_back({"w", w});
      v.lhs = oracle.eval(yp);
      v.rhs = f_y + dot(w, step) - 0.5 * L * dot(step, step);
      v.gap = residual;
      v.note = "lower quadratic estimate violated";
      record_violation(cert, std::move(v));
    }
  }
  cert.estimated_constants["min_residual"] = min_residual;
  cert.passed = cert.violations_total == 0;
  return cert;
}

Certificate check_subdiff_lipschitz(const ObjectiveOracle& oracle,
                                    const std::vector<Vector>& omega_samples, double delta,
                                    double L, const SamplingPlan& plan) {
  plan.validate();
  if (omega_samples.empty()) {
    throw ConfigError("check_subdiff_lipschitz: at least one level-set sample required");
  }
  for (const Vector& y : omega_samples) {
    if (y.dim() != oracle.dim()) {
      throw DimensionError("check_subdiff_lipschitz: dimension mismatch");
    }
  }
  if (!(delta > 0.0)) throw ConfigError("check_subdiff_lipschitz: delta must be positive");
  if (!(L > 0.0)) throw ConfigError("check_subdiff_lipschitz: L must be positive");

  Certificate cert;
  cert.kind = CertificateKind::SubdiffLipschitz;
  cert.estimated_constants["L"] = L;
  cert.estimated_constants["delta"] = delta;

  constexpr double kSlack = 1e-10;
  BallSampler sampler(plan.seed);
  double max_ratio = 0.0;

  for (std::size_t i = 0; i < plan.num_points; ++i) {
    const Vector& y = omega_samples[i % omega_samples.size()];
    // strict interior of the delta-ball around y
    const Vector z = sampler.draw(y, delta * (1.0 - 1e-9));
    const double dist_yz = norm(subtract(z, y));
    if (dist_yz == 0.0) continue;
    const SubdifferentialDescriptor at_z = oracle.prox_subdifferential(z);
    ++cert.samples_tested;
    for (const Vector& g : descriptor_representatives(oracle.prox_subdifferential(y))) {
      const double dist = distance_to_descriptor(g, at_z);
      max_ratio = std::max(max_ratio, dist / dist_yz);
      if (dist > L * dist_yz + kSlack) {
        Violation v;
        v.witness.push_back({"y", y});
        v.witness.push_back({"z", z});
        v.witness.push_back({"generator", g});
        v.lhs = dist;
        v.rhs = L * dist_yz;
        v.gap = dist - L * dist_yz;
        v.note = "generator escapes the inflated subdifferential";
        record_violation(cert, std::move(v));
      }
    }
  }
  cert.estimated_constants["max_observed_ratio"] = max_ratio;
  cert.passed = cert.violations_total == 0;
  return cert;
}

Certificate check_hessian_bounds(const ObjectiveOracle& oracle, double m, double M,
                                 std::uint64_t seed) {
  const auto* quad = dynamic_cast<const ConvexQuadraticOracle*>(&oracle);
  if (quad == nullptr) {
    throw NotQuadraticError("check_hessian_bounds: oracle '" + oracle.id() +
                            "' is not a quadratic");
  }
  if (!(m <= M)) throw ConfigError("check_hessian_bounds: m must not exceed M");
  const Matrix& A = quad->matrix();

  Certificate cert;
  cert.kind = CertificateKind::HessianBounds;
  cert.estimated_constants["m"] = m;
  cert.estimated_constants["M"] = M;

  const double slack = 1e-9 * (1.0 + std::max(std::abs(m), std::abs(M)));
  auto check_quotient = [&](const Vector& y, const char* role) {
    const double q = dot(y, A.apply(y)) / dot(y, y);
    ++cert.samples_tested;
    if (q < m - slack || q > M + slack) {
      Violation v;
      v.witness.push_back({role, y});
      v.lhs = q;
      v.rhs = (q < m) ? m : M;
      v.gap = (q < m) ? m - q : q - M;
      v.note = (q < m) ? "Rayleigh quotient below m" : "Rayleigh quotient above M";
      record_violation(cert, std::move(v));
    }
  };

  const EigenBounds eig = symmetric_eigen_bounds(A, seed);
  cert.estimated_constants["lambda_min_est"] = eig.lambda_min;
  cert.estimated_constants["lambda_max_est"] = eig.lambda_max;
  check_quotient(eig.vec_min, "eigvec_min");
  check_quotient(eig.vec_max, "eigvec_max");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> e(A.dim());
    for (double& v : e) v = gauss(rng);
    Vector y(std::move(e));
    if (norm(y) == 0.0) continue;
    check_quotient(normalized(y), "probe");
  }

  cert.passed = cert.violations_total == 0;
  return cert;
}

Certificate finite_difference_gradient_check(const ObjectiveOracle& oracle, const Vector& x,
                                             double h) {
  if (x.dim() != oracle.dim()) {
    throw DimensionError("finite_difference_gradient_check: dimension mismatch");
  }
  if (!(h > 0.0)) throw ConfigError("finite_difference_gradient_check: h must be positive");
  const SubdifferentialDescriptor d = oracle.prox_subdifferential(x);
  if (d.form() != SubdifferentialDescriptor::Form::Singleton) {
    throw NotSmoothAtError("finite_difference_gradient_check: descriptor at x is not a singleton");
  }
  const Vector& g = d.singleton_value();

  // The singleton is the claimed proximal subgradient; the central-difference
  // probe certifies its membership through the directional limit.
  Certificate cert;
  cert.kind = CertificateKind::ProxSubgradientMembership;
  cert.estimated_constants["h"] = h;

  const double f_x = oracle.eval(x);
  const double threshold = 10.0 * h * h * (1.0 + std::abs(f_x));
  double max_dev = 0.0;
  std::size_t worst = 0;
  std::vector<double> fd(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const Vector ei = Vector::unit(x.dim(), i);
    const double fp = oracle.eval(axpy(h, ei, x));
    const double fm = oracle.eval(axpy(-h, ei, x));
    fd[i] = (fp - fm) / (2.0 * h);
    ++cert.samples_tested;
    const double dev = std::abs(fd[i] - g[i]);
    if (dev > max_dev) {
      max_dev = dev;
      worst = i;
    }
  }
  cert.estimated_constants["max_abs_deviation"] = max_dev;
  cert.estimated_constants["threshold"] = threshold;
  if (max_dev > threshold) {
    Violation v;
    v.witness.push_back({"x", x});
    v.witness.push_back({"central_differences", Vector(std::move(fd))});
    v.lhs = max_dev;
    v.rhs = threshold;
    v.gap = max_dev - threshold;
    v.note = "coordinate " + std::to_string(worst) + " deviates from the descriptor";
    record_violation(cert, std::move(v));
  }
  cert.passed = cert.violations_total == 0;
  return cert;
}

std::vector<Vector> sample_level_set(const ObjectiveOracle& oracle, const Vector& x0,
                                     double radius, std::size_t count, std::uint64_t seed) {
  if (x0.dim() != oracle.dim()) {
    throw DimensionError("sample_level_set: dimension mismatch");
  }
  if (!(radius > 0.0)) throw ConfigError("sample_level_set: radius must be positive");
  const double f0 = oracle.eval(x0);
  std::vector<Vector> out;
  out.push_back(x0);
  BallSampler sampler(seed);
  const std::size_t budget = 200 * count + 1000;
  for (std::size_t i = 0; i < budget && out.size() < count; ++i) {
    Vector y = sampler.draw(x0, radius);
    if (oracle.eval(y) <= f0) out.push_back(std::move(y));
  }
  return out;
}

}  // namespace nsdm
