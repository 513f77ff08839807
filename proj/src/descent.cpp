#include "nsdm/descent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

namespace nsdm {

void SolverConfig::validate() const {
  if (!(tol_subgrad > 0.0)) throw ConfigError("solver config: tol_subgrad must be positive");
  if (max_iters == 0) throw ConfigError("solver config: max_iters must be positive");
  if (!(t_max > 0.0)) throw ConfigError("solver config: t_max must be positive");
  if (!(tol_t > 0.0)) throw ConfigError("solver config: tol_t must be positive");
  if (probe_epsilon && !(*probe_epsilon > 0.0)) {
    throw ConfigError("solver config: probe_epsilon must be positive");
  }
}

namespace {

RunTrace run_descent_loop(const ObjectiveOracle& oracle, const Vector& x0,
                          const SolverConfig& cfg, bool require_singleton) {
  cfg.validate();
  if (x0.dim() != oracle.dim()) {
    throw DimensionError("descent: start point dimension does not match oracle");
  }
  if (require_singleton && oracle.function_class() != FunctionClass::Smooth &&
      oracle.function_class() != FunctionClass::ConvexQuadratic) {
    throw NotSmoothError("run_sdm: oracle '" + oracle.id() +
                         "' can return non-singleton descriptors");
  }

  const auto t_begin = std::chrono::steady_clock::now();
  const bool store_x = cfg.store_iterates.value_or(oracle.dim() <= kStoreIteratesMaxDim);

  RunTrace trace;
  Vector x = x0;
  double f_x = oracle.eval(x);
  std::uint64_t evals = 1;
  if (!std::isfinite(f_x)) {
    throw InvalidStartError("descent: objective not finite at the start point");
  }

  for (std::size_t n = 0;; ++n) {
    const SubdifferentialDescriptor d = oracle.prox_subdifferential(x);
    const Vector v = select_subgradient(d, cfg.selection_rule);
    const double v_norm = norm(v);

    IterationRecord rec;
    rec.n = n;
    if (store_x) rec.x = x;
    rec.f_value = f_x;
    rec.subgrad_norm = v_norm;
    rec.step_length = 0.0;
    rec.oracle_evals = evals;
    rec.status = IterStatus::Continued;

    if (v_norm == 0.0) {
      rec.status = IterStatus::TerminatedZeroSubgradient;
    } else if (v_norm <= cfg.tol_subgrad) {
      rec.status = IterStatus::TerminatedTolerance;
    } else if (n == cfg.max_iters) {
      rec.status = IterStatus::MaxIterations;
    }
    if (rec.status != IterStatus::Continued) {
      trace.records.push_back(std::move(rec));
      break;
    }

    const Vector u = normalized(scale(-1.0, v));
    const LineSearchResult ls = exact_line_search(oracle, x, u, cfg.t_max, cfg.tol_t);
    evals += ls.evaluations;
    rec.oracle_evals = evals;
    if (ls.t_star == 0.0) {
      rec.status = IterStatus::LineSearchStall;
      trace.records.push_back(std::move(rec));
      break;
    }
    rec.step_length = ls.t_star;
    trace.records.push_back(std::move(rec));

    x = axpy(ls.t_star, u, x);
    f_x = ls.f_at_t_star;  // same arithmetic the next eval would produce
  }

  trace.termination = trace.records.back().status;
  trace.final_x = x;
  trace.wall_time = std::chrono::steady_clock::now() - t_begin;
  return trace;
}

}  // namespace

RunTrace run_nsdm(const ObjectiveOracle& oracle, const Vector& x0, const SolverConfig& cfg) {
  return run_descent_loop(oracle, x0, cfg, /*require_singleton=*/false);
}

RunTrace run_sdm(const ObjectiveOracle& oracle, const Vector& x0, const SolverConfig& cfg) {
  return run_descent_loop(oracle, x0, cfg, /*require_singleton=*/true);
}

Certificate descent_bound_report(const RunTrace& trace, double L, double probe_epsilon) {
  if (!(L > 0.0)) throw ConfigError("descent_bound_report: L must be positive");
  if (!(probe_epsilon > 0.0)) {
    throw ConfigError("descent_bound_report: probe_epsilon must be positive");
  }
  if (trace.records.size() < 2) {
    throw InsufficientTraceError("descent_bound_report: at least two records required");
  }

  constexpr double kSlack = 1e-9;
  Certificate cert;
  cert.kind = CertificateKind::DescentBound;
  cert.estimated_constants["L"] = L;
  cert.estimated_constants["epsilon"] = probe_epsilon;

  double worst_gap = 0.0;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const IterationRecord& prev = trace.records[i - 1];
    const IterationRecord& cur = trace.records[i];
    const double lhs = prev.subgrad_norm;
    const double rhs = (prev.f_value - cur.f_value) / probe_epsilon +
                       1.5 * L * probe_epsilon;
    ++cert.samples_tested;
    const double gap = lhs - rhs;
    worst_gap = std::max(worst_gap, gap);
    if (lhs > rhs + kSlack) {
      ++cert.violations_total;
      if (cert.violations.size() < kMaxRecordedViolations) {
        Violation v;
        v.lhs = lhs;
        v.rhs = rhs;
        v.gap = gap;
        v.note = "steps " + std::to_string(prev.n) + " -> " + std::to_string(cur.n);
        if (prev.x) v.witness.push_back({"x_prev", *prev.x});
        if (cur.x) v.witness.push_back({"x_next", *cur.x});
        cert.violations.push_back(std::move(v));
      }
    }
  }
  cert.estimated_constants["worst_gap"] = worst_gap;
  cert.passed = cert.violations_total == 0;
  return cert;
}

}  // namespace nsdm
