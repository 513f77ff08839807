#include "nsdm/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nsdm {

namespace {

void validate_entries(const std::vector<double>& entries) {
  if (entries.empty()) {
    throw DimensionError("Vector: dimension must be at least 1");
  }
  for (double e : entries) {
    if (!std::isfinite(e)) {
      throw NonFiniteError("Vector: entries must be finite");
    }
  }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  validate_entries(entries_);
}

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) {
  validate_entries(entries_);
}

Vector Vector::zeros(std::size_t dim) {
  return Vector(std::vector<double>(dim, 0.0));
}

Vector Vector::unit(std::size_t dim, std::size_t axis) {
  std::vector<double> e(dim, 0.0);
  e.at(axis) = 1.0;
  return Vector(std::move(e));
}

double dot(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dot: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double norm(const Vector& a) {
  const double sq = dot(a, a);
  if (sq > 1e-280) {
    return std::sqrt(sq);
  }
  // Rescale so tiny entries cannot underflow to a spurious zero.
  double max_abs = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    max_abs = std::max(max_abs, std::abs(a[i]));
  }
  if (max_abs == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double r = a[i] / max_abs;
    s += r * r;
  }
  return max_abs * std::sqrt(s);
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("axpy: dimension mismatch");
  }
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out[i] = alpha * x[i] + y[i];
  }
  return Vector(std::move(out));
}

Vector subtract(const Vector& a, const Vector& b) {
  return axpy(-1.0, b, a);
}

Vector scale(double alpha, const Vector& x) {
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out[i] = alpha * x[i];
  }
  return Vector(std::move(out));
}

Vector normalized(const Vector& x) {
  const double n = norm(x);
  if (n == 0.0) {
    throw NonFiniteError("normalized: zero vector has no direction");
  }
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out[i] = x[i] / n;
  }
  return Vector(std::move(out));
}

std::string_view iter_status_name(IterStatus s) {
  switch (s) {
    case IterStatus::Continued: return "continued";
    case IterStatus::TerminatedZeroSubgradient: return "terminated_zero_subgradient";
    case IterStatus::TerminatedTolerance: return "terminated_tolerance";
    case IterStatus::LineSearchStall: return "line_search_stall";
    case IterStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

IterStatus iter_status_from_name(std::string_view name) {
  if (name == "continued") return IterStatus::Continued;
  if (name == "terminated_zero_subgradient") return IterStatus::TerminatedZeroSubgradient;
  if (name == "terminated_tolerance") return IterStatus::TerminatedTolerance;
  if (name == "line_search_stall") return IterStatus::LineSearchStall;
  if (name == "max_iterations") return IterStatus::MaxIterations;
  throw ConfigError("unknown iteration status: " + std::string(name));
}

bool is_terminal(IterStatus s) {
  return s != IterStatus::Continued;
}

std::string_view certificate_kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::ProxSubgradientMembership: return "prox_subgradient_membership";
    case CertificateKind::ProxRegularity: return "prox_regularity";
    case CertificateKind::SubdiffLipschitz: return "subdiff_lipschitz";
    case CertificateKind::HessianBounds: return "hessian_bounds";
    case CertificateKind::DescentBound: return "descent_bound";
  }
  return "unknown";
}

}  // namespace nsdm
