#pragma once

#include <functional>

#include "nsdm/core.hpp"
#include "nsdm/oracle.hpp"

namespace nsdm {

enum class LineSearchStatus {
  Interior,      // minimum located strictly inside (0, t_max)
  AtZero,        // no descent found along the ray; t_star == 0
  AtBracketCap,  // objective still decreasing at t_max; true min may lie beyond
};

struct LineSearchResult {
  double t_star = 0.0;
  double f_at_t_star = 0.0;
  std::size_t evaluations = 0;
  LineSearchStatus status = LineSearchStatus::Interior;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool hit_cap = false;
};

/// Geometric expansion (factor 2) from an initial step, capped at t_max.
/// Returns [lo, hi] containing a local minimizer of phi when phi turns
/// upward inside the cap; hit_cap flags a probe sequence that was still
/// descending at t_max.
Bracket bracket_minimum(const std::function<double(double)>& phi, double t_max);

/// Golden-section refinement on [lo, hi]. For unimodal phi the returned point
/// is within tol_t of the minimizer; the evaluation count is
/// ceil(log((hi-lo)/tol_t)/log(1/0.618...)) + 2 or fewer.
double golden_section(const std::function<double(double)>& phi, double lo, double hi,
                      double tol_t);

/// Exact line search: approximates argmin over t in [0, t_max] of
/// phi(t) = f(x + t u) for a unit direction u.
///
/// Bracketing plus golden section locates the minimizer; a parabolic polish
/// through three evenly spaced samples then refines smooth minima well below
/// the plateau where function-value comparisons go flat. A polish candidate
/// is kept only if its measured value does not exceed the incumbent beyond a
/// rounding-level slack, which keeps kinked minimizers with the sharper
/// golden-section result. Smooth nonconvex oracles get a 64-point log-spaced
/// pre-scan over (0, t_max] so a bracket expanded from zero cannot settle on
/// the wrong valley.
///
/// Never returns an ascent step: if no candidate measurably improves on
/// phi(0), the result is t_star = 0 with status AtZero.
LineSearchResult exact_line_search(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& u, double t_max, double tol_t);

}  // namespace nsdm
