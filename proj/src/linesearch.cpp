#include "nsdm/linesearch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace nsdm {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct BestPoint {
  double t = 0.0;
  double f = std::numeric_limits<double>::infinity();

  void offer(double tt, double ff) {
    if (ff < f) {
      t = tt;
      f = ff;
    }
  }
};

// Golden section that additionally reports the best evaluated point and the
// number of evaluations spent.
BestPoint golden_section_tracked(const std::function<double(double)>& phi, double lo,
                                 double hi, double tol_t, std::size_t* evals) {
  BestPoint best;
  double c = hi - kGolden * (hi - lo);
  double d = lo + kGolden * (hi - lo);
  double fc = phi(c);
  double fd = phi(d);
  if (evals) *evals += 2;
  best.offer(c, fc);
  best.offer(d, fd);
  while (hi - lo > tol_t) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kGolden * (hi - lo);
      fc = phi(c);
      if (evals) *evals += 1;
      best.offer(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kGolden * (hi - lo);
      fd = phi(d);
      if (evals) *evals += 1;
      best.offer(d, fd);
    }
  }
  return best;
}

// Vertex of the parabola through three points with increasing abscissae,
// or no value when the fit is not strictly convex.
std::optional<double> parabola_vertex(double x1, double y1, double x2, double y2,
                                      double x3, double y3) {
  if (!(x1 < x2 && x2 < x3)) return std::nullopt;
  const double s12 = (y2 - y1) / (x2 - x1);
  const double s23 = (y3 - y2) / (x3 - x2);
  const double curv = (s23 - s12) / (x3 - x1);
  if (!(curv > 0.0)) return std::nullopt;
  const double v = 0.5 * (x1 + x2) - s12 / (2.0 * curv);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Bracket bracket_minimum(const std::function<double(double)>& phi, double t_max) {
  if (!(t_max > 0.0)) {
    throw ConfigError("bracket_minimum: t_max must be positive");
  }
  auto probe = [&phi](double t) {
    const double f = phi(t);
    if (!std::isfinite(f)) {
      throw NonFiniteValueError("bracket_minimum: objective not finite along the ray");
    }
    return f;
  };

  const double f0 = probe(0.0);
  double t_prev = 0.0;
  double t_cur = std::min(1.0, 0.5 * t_max);
  double f_cur = probe(t_cur);
  if (f_cur > f0) {
    return Bracket{0.0, t_cur, false};
  }
  while (true) {
    const double t_next = 2.0 * t_cur;
    if (t_next >= t_max) {
      const double f_cap = probe(t_max);
      if (f_cap > f_cur) {
        return Bracket{t_prev, t_max, false};
      }
      return Bracket{t_cur, t_max, true};
    }
    const double f_next = probe(t_next);
    if (f_next > f_cur) {
      return Bracket{t_prev, t_next, false};
    }
    t_prev = t_cur;
    t_cur = t_next;
    f_cur = f_next;
  }
}

double golden_section(const std::function<double(double)>& phi, double lo, double hi,
                      double tol_t) {
  if (!(lo < hi)) {
    throw ConfigError("golden_section: lo must be below hi");
  }
  return golden_section_tracked(phi, lo, hi, tol_t, nullptr).t;
}

LineSearchResult exact_line_search(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& u, double t_max, double tol_t) {
  if (x.dim() != oracle.dim() || u.dim() != oracle.dim()) {
    throw DimensionError("exact_line_search: dimension mismatch");
  }
  if (std::abs(norm(u) - 1.0) > 1e-12) {
    throw NonUnitDirectionError("exact_line_search: direction must be unit length");
  }
  if (!(t_max > 0.0) || !(tol_t > 0.0)) {
    throw ConfigError("exact_line_search: t_max and tol_t must be positive");
  }

  std::size_t evals = 0;
  auto phi = [&](double t) {
    const double f = (t == 0.0) ? oracle.eval(x) : oracle.eval(axpy(t, u, x));
    ++evals;
    if (!std::isfinite(f)) {
      throw NonFiniteValueError("exact_line_search: objective not finite along the ray");
    }
    return f;
  };

  const double f0 = phi(0.0);

  // Locate a bracket.
  Bracket br{0.0, t_max, false};
  const bool prescan = oracle.function_class() == FunctionClass::Smooth && !oracle.convex();
  if (prescan) {
    // Coarse log-spaced scan guards against a bracket expanded from zero
    // missing the ray minimum of a nonconvex objective.
    constexpr int kGrid = 64;
    std::array<double, kGrid> ts;
    std::array<double, kGrid> fs;
    int best_i = 0;
    for (int i = 0; i < kGrid; ++i) {
      const double e = 1.0 - static_cast<double>(i) / (kGrid - 1);
      ts[i] = t_max * std::pow(1e-12, e);
      fs[i] = phi(ts[i]);
      if (fs[i] < fs[best_i]) best_i = i;
    }
    if (fs[best_i] >= f0) {
      br = Bracket{0.0, ts[0], false};
    } else {
      br.lo = best_i > 0 ? ts[best_i - 1] : 0.0;
      br.hi = best_i < kGrid - 1 ? ts[best_i + 1] : t_max;
      br.hit_cap = (best_i == kGrid - 1);
    }
  } else {
    br = bracket_minimum(phi, t_max);
  }

  BestPoint best = golden_section_tracked(phi, br.lo, br.hi, tol_t, &evals);

  // Parabolic polish. Golden section alone cannot place a smooth minimizer
  // more accurately than the plateau where f comparisons drown in rounding
  // noise; a fit through three evenly spaced, well separated samples can.
  const double width = br.hi - br.lo;
  bool polish_accepted = false;
  const double ascent_slack = 1e-13 * (1.0 + std::abs(f0));
  for (const double frac : {0.25, 0.02}) {
    const double h = std::max(frac * width, 4.0 * tol_t);
    if (2.0 * h > t_max) continue;
    double p1 = best.t - h;
    if (p1 < 0.0) p1 = 0.0;
    if (p1 + 2.0 * h > t_max) p1 = t_max - 2.0 * h;
    const double p2 = p1 + h;
    const double p3 = p1 + 2.0 * h;
    const double q1 = phi(p1);
    const double q2 = phi(p2);
    const double q3 = phi(p3);
    const auto vertex = parabola_vertex(p1, q1, p2, q2, p3, q3);
    if (!vertex || !(*vertex > 0.0) || !(*vertex <= t_max)) continue;
    const double fv = phi(*vertex);
    const double keep_slack = 100.0 * kEps * (1.0 + std::abs(best.f));
    if (fv <= best.f + keep_slack && fv <= f0 + ascent_slack) {
      best.t = *vertex;
      best.f = fv;
      polish_accepted = true;
    }
  }

  LineSearchResult out;
  out.evaluations = evals;
  const bool measurable_descent = best.f < f0;
  const bool polished_descent = polish_accepted && best.f <= f0 + ascent_slack;
  if (best.t <= 0.0 || (!measurable_descent && !polished_descent)) {
    out.t_star = 0.0;
    out.f_at_t_star = f0;
    out.status = LineSearchStatus::AtZero;
    return out;
  }
  out.t_star = best.t;
  out.f_at_t_star = best.f;
  out.status = br.hit_cap ? LineSearchStatus::AtBracketCap : LineSearchStatus::Interior;
  return out;
}

}  // namespace nsdm
