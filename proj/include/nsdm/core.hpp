#pragma once

#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nsdm {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };
struct EmptyHullError : Error { using Error::Error; };
struct EmptyPiecesError : Error { using Error::Error; };
struct NonUnitDirectionError : Error { using Error::Error; };
struct NonFiniteValueError : Error { using Error::Error; };
struct NotSmoothError : Error { using Error::Error; };
struct NotSmoothAtError : Error { using Error::Error; };
struct NotQuadraticError : Error { using Error::Error; };
struct InsufficientTraceError : Error { using Error::Error; };
struct InvalidStartError : Error { using Error::Error; };
struct SingularMatrixError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// Dense point/direction in R^n. Construction validates the invariants every
/// public operation relies on: dimension at least one and all entries finite,
/// so a NaN/Inf can never leak into descent or line-search bookkeeping.
/// Immutable after construction; safe to share across threads.
class Vector {
 public:
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  static Vector zeros(std::size_t dim);
  static Vector unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  friend bool operator==(const Vector& a, const Vector& b) noexcept {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<double> entries_;
};

/// Inner product <a, b>. Throws DimensionError on mismatched dimensions.
double dot(const Vector& a, const Vector& b);

/// Euclidean norm; zero exactly when a is the zero vector.
double norm(const Vector& a);

/// alpha * x + y, componentwise. Throws DimensionError on mismatch.
Vector axpy(double alpha, const Vector& x, const Vector& y);

/// a - b as a convenience over axpy(-1, b, a).
Vector subtract(const Vector& a, const Vector& b);

/// alpha * x, componentwise.
Vector scale(double alpha, const Vector& x);

/// x / norm(x). Throws NonFiniteError on the zero vector.
Vector normalized(const Vector& x);

// ---------------------------------------------------------------------------
// Run traces
// ---------------------------------------------------------------------------

enum class IterStatus {
  Continued,
  TerminatedZeroSubgradient,
  TerminatedTolerance,
  LineSearchStall,
  MaxIterations,
};

std::string_view iter_status_name(IterStatus s);
IterStatus iter_status_from_name(std::string_view name);
bool is_terminal(IterStatus s);

/// One iterate of a descent run. `x` is omitted above the solver's
/// iterate-storage cutoff to keep long high-dimensional traces bounded;
/// `oracle_evals` counts objective evaluations cumulatively.
struct IterationRecord {
  std::size_t n = 0;
  std::optional<Vector> x;
  double f_value = 0.0;
  double subgrad_norm = 0.0;
  double step_length = 0.0;
  std::uint64_t oracle_evals = 0;
  IterStatus status = IterStatus::Continued;
};

/// Full per-iteration history of one run. The last record carries the
/// terminal status; all earlier records are Continued and indices run
/// consecutively from zero. `final_x` is kept even when per-record iterates
/// are not stored.
struct RunTrace {
  std::vector<IterationRecord> records;
  IterStatus termination = IterStatus::Continued;
  std::chrono::duration<double> wall_time{0.0};
  std::optional<Vector> final_x;
};

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

enum class CertificateKind {
  ProxSubgradientMembership,
  ProxRegularity,
  SubdiffLipschitz,
  HessianBounds,
  DescentBound,
};

std::string_view certificate_kind_name(CertificateKind k);

/// A labelled vector inside a violation witness ("y", "z", "generator", ...).
struct WitnessPoint {
  std::string role;
  Vector value;
};

/// One concrete counterexample to a checked inequality: re-evaluating the
/// inequality at the witness points reproduces lhs/rhs/gap.
struct Violation {
  std::vector<WitnessPoint> witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::string note;
};

/// Outcome of a sampled numerical check of one hypothesis. A failure is a
/// proof (the witness is a counterexample); a pass is one-sided evidence
/// only, which `one_sided` records explicitly. `violations` keeps at most
/// the first few counterexamples; `violations_total` counts all of them.
struct Certificate {
  CertificateKind kind = CertificateKind::ProxSubgradientMembership;
  bool passed = false;
  bool one_sided = true;
  std::size_t samples_tested = 0;
  std::map<std::string, double> estimated_constants;
  std::vector<Violation> violations;
  std::size_t violations_total = 0;
};

/// Max violations retained inside a Certificate.
inline constexpr std::size_t kMaxRecordedViolations = 32;

}  // namespace nsdm
