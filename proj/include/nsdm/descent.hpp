#pragma once

#include <cstdint>
#include <optional>

#include "nsdm/core.hpp"
#include "nsdm/linesearch.hpp"
#include "nsdm/oracle.hpp"

namespace nsdm {

/// Knobs shared by both descent drivers. The subgradient termination
/// threshold reads the "terminate at zero" step of the method numerically:
/// exact zeros are recorded distinctly when they occur.
struct SolverConfig {
  double tol_subgrad = 1e-8;
  std::size_t max_iters = 100000;
  double t_max = 1e3;
  double tol_t = 1e-10;
  SelectionRule selection_rule = SelectionRule::MinNorm;
  std::optional<double> probe_epsilon;   // epsilon for the descent-bound diagnostic
  std::optional<bool> store_iterates;    // default: store when dim <= 64

  void validate() const;
};

/// Iterate-storage cutoff applied when store_iterates is unset.
inline constexpr std::size_t kStoreIteratesMaxDim = 64;

/// Proximal-subgradient steepest descent: at each iterate select a
/// subgradient v from the descriptor, stop when ||v|| is at the tolerance
/// (exactly zero is recorded as its own status), otherwise step to the exact
/// line-search minimum along -v/||v||. A zero-length exact step terminates
/// the run as LineSearchStall rather than looping.
RunTrace run_nsdm(const ObjectiveOracle& oracle, const Vector& x0, const SolverConfig& cfg);

/// Classical steepest descent for smooth objectives; the same loop driven by
/// the gradient. Requires an oracle whose descriptors are singletons
/// everywhere (Smooth or ConvexQuadratic class) and produces the identical
/// decision sequence run_nsdm does on such oracles.
RunTrace run_sdm(const ObjectiveOracle& oracle, const Vector& x0, const SolverConfig& cfg);

/// Checks the per-step descent bound
///   ||v_{n-1}|| <= (f(x_{n-1}) - f(x_n)) / epsilon + (3/2) L epsilon
/// along a recorded trace, with a small absolute slack. Requires at least
/// two records.
Certificate descent_bound_report(const RunTrace& trace, double L, double probe_epsilon);

}  // namespace nsdm
