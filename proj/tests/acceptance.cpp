// Acceptance suite: one pass/fail line per criterion, exit code equal to the
// number of failed criteria. Expected values come from closed forms checked
// in the unit suites (grid oracles, soft thresholds, eigenvalues of 2x2
// matrices) and are asserted here at the stated tolerances.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "nsdm/cli.hpp"
#include "nsdm/descent.hpp"
#include "nsdm/io.hpp"
#include "nsdm/linalg.hpp"
#include "nsdm/problems.hpp"
#include "nsdm/verify.hpp"

using namespace nsdm;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string description;
  bool passed = true;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& detail) {
    if (!ok) {
      passed = false;
      failures.push_back(detail);
    }
  }
};

std::vector<Criterion> g_results;

Criterion& begin(int number, const std::string& description) {
  g_results.push_back(Criterion{number, description});
  return g_results.back();
}

const ProblemSpec& corpus_entry(const std::vector<ProblemSpec>& corpus,
                                const std::string& id) {
  for (const ProblemSpec& s : corpus) {
    if (s.id == id) return s;
  }
  throw std::runtime_error("missing corpus entry " + id);
}

bool close_rel(double value, double expected, double tol) {
  return std::abs(value - expected) <= tol * (1.0 + std::abs(expected));
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

// --------------------------------------------------------------------------

void criterion_1_one_step_translation() {
  Criterion& c = begin(
      1, "one-step reproduction of the translation quadratic, dims {1,3,10,100}");
  for (std::size_t dim : {1u, 3u, 10u, 100u}) {
    const ProblemSpec spec = make_l2_quadratic(dim, 7);
    const Vector& y = *spec.known_minimizer;
    const RunTrace trace = run_nsdm(*spec.oracle, spec.x0, SolverConfig{});
    const std::string tag = "dim " + std::to_string(dim) + ": ";
    c.require(trace.records.size() == 2,
              tag + "expected exactly one line-search step, got " +
                  std::to_string(trace.records.size() - 1));
    const double dist = norm(subtract(*trace.final_x, y));
    c.require(dist <= 1e-8, tag + "||x_final - y|| = " + fmt(dist));
    const double expected_f = 3.0 - 0.5 * dot(y, y);
    const double got_f = trace.records.back().f_value;
    c.require(close_rel(got_f, expected_f, 1e-10),
              tag + "f(x_final) = " + fmt(got_f) + " vs " + fmt(expected_f));
  }
}

void criterion_2_lipschitz_constant() {
  Criterion& c = begin(2,
                       "subdifferential Lipschitz constant of the translation "
                       "quadratic: passes at L=1, witnessed failure at L=0.5");
  const ProblemSpec spec = make_l2_quadratic(10, 7);
  const Vector& y_star = *spec.known_minimizer;
  SamplingPlan plan;
  plan.num_points = 2000;
  plan.seed = 42;
  const auto omega =
      sample_level_set(*spec.oracle, spec.x0, spec.declared_constants.at("R"), 50, 43);

  const Certificate pass = check_subdiff_lipschitz(*spec.oracle, omega, 0.5, 1.0, plan);
  c.require(pass.passed, "L=1 should pass; " + std::to_string(pass.violations_total) +
                             " violations");
  c.require(pass.samples_tested == 2000,
            "expected 2000 sampled pairs, got " + std::to_string(pass.samples_tested));

  const Certificate fail = check_subdiff_lipschitz(*spec.oracle, omega, 0.5, 0.5, plan);
  c.require(!fail.passed, "L=0.5 should fail");
  c.require(!fail.violations.empty(), "no witness recorded at L=0.5");
  if (!fail.violations.empty()) {
    // reproduce the witness: distance between the gradients is exactly ||y-z||
    const Violation& v = fail.violations.front();
    const Vector& y = v.witness[0].value;
    const Vector& z = v.witness[1].value;
    const double dist = norm(subtract(subtract(y, y_star), subtract(z, y_star)));
    const double allowed = 0.5 * norm(subtract(y, z)) + 1e-10;
    c.require(dist > allowed,
              "witness fails to reproduce: " + fmt(dist) + " <= " + fmt(allowed));
  }
}

void criterion_3_strict_convex_quadratic() {
  Criterion& c = begin(3,
                       "2x2 quadratic: Hessian bounds (1,3) certified; descent "
                       "reaches f=-3 and x=(1,1) within 200 iterations");
  const auto corpus = default_corpus();
  const ProblemSpec& spec = corpus_entry(corpus, "quadratic_sym2");

  const Certificate h = check_hessian_bounds(*spec.oracle, 1.0, 3.0);
  c.require(h.passed, "hessian bounds (1,3) should pass");

  const RunTrace trace = run_nsdm(*spec.oracle, spec.x0, SolverConfig{});
  c.require(trace.records.size() - 1 <= 200,
            "took " + std::to_string(trace.records.size() - 1) + " iterations");
  const double f_final = trace.records.back().f_value;
  c.require(std::abs(f_final - (-3.0)) <= 1e-10, "f_final = " + fmt(f_final));
  const double dist = norm(subtract(*trace.final_x, Vector{1.0, 1.0}));
  c.require(dist <= 1e-5, "||x_final - (1,1)|| = " + fmt(dist));
}

void criterion_4_nonsmooth_convex() {
  Criterion& c = begin(4,
                       "nonsmooth convex runs terminate at ||v|| <= 1e-8 on the "
                       "soft-threshold optima");
  const auto corpus = default_corpus();

  struct Case {
    std::string id;
    Vector expected;
  };
  const std::vector<Case> cases = {
      {"abs1d", Vector{0.0}},
      {"l1_soft1d", Vector{1.0}},
      {"l1_soft1d_sub", Vector{0.0}},
      {"l1_soft2d", Vector{1.5, -1.5}},
  };
  for (const Case& cs : cases) {
    const ProblemSpec& spec = corpus_entry(corpus, cs.id);
    const RunTrace trace = run_nsdm(*spec.oracle, spec.x0, SolverConfig{});
    const bool ok_status = trace.termination == IterStatus::TerminatedTolerance ||
                           trace.termination == IterStatus::TerminatedZeroSubgradient;
    c.require(ok_status,
              cs.id + ": terminated " + std::string(iter_status_name(trace.termination)));
    c.require(trace.records.back().subgrad_norm <= 1e-8,
              cs.id + ": ||v|| = " + fmt(trace.records.back().subgrad_norm));
    const double dist = norm(subtract(*trace.final_x, cs.expected));
    c.require(dist <= 1e-6, cs.id + ": ||x_final - x*|| = " + fmt(dist));
  }
}

void criterion_5_descent_bound() {
  Criterion& c = begin(5,
                       "per-step descent bound holds on every convex corpus trace "
                       "at (eps, L) = (0.1, declared L)");
  for (const ProblemSpec& spec : default_corpus()) {
    if (!spec.convex) continue;
    const RunTrace trace = run_nsdm(*spec.oracle, spec.x0, SolverConfig{});
    if (trace.records.size() < 2) {
      c.require(false, spec.id + ": trace too short for the bound");
      continue;
    }
    const double L = spec.declared_constants.at("L");
    const Certificate cert = descent_bound_report(trace, L, 0.1);
    c.require(cert.passed, spec.id + ": descent bound violated " +
                               std::to_string(cert.violations_total) +
                               " times at L=" + fmt(L));
  }
}

void criterion_6_monotone_descent_and_confinement() {
  Criterion& c = begin(6,
                       "monotone descent and level-set confinement across the "
                       "corpus, 20 random starts each");
  SolverConfig cfg;
  cfg.max_iters = 400;
  for (const ProblemSpec& spec : default_corpus()) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Vector x0 = random_start(spec, seed);
      const RunTrace trace = run_nsdm(*spec.oracle, x0, cfg);
      const double f0 = trace.records.front().f_value;
      for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const double prev = trace.records[i - 1].f_value;
        const double cur = trace.records[i].f_value;
        if (!(cur <= prev + 1e-12 * (1.0 + std::abs(prev)))) {
          c.require(false, spec.id + " seed " + std::to_string(seed) + " step " +
                               std::to_string(i) + ": ascent " + fmt(prev) + " -> " +
                               fmt(cur));
          break;
        }
        if (!(cur <= f0)) {
          c.require(false, spec.id + " seed " + std::to_string(seed) + " step " +
                               std::to_string(i) + ": left the level set");
          break;
        }
      }
    }
  }
}

void criterion_7_subgradient_decay() {
  Criterion& c = begin(7,
                       "running min of ||v_n|| falls below 1e-8 on every bounded "
                       "convex corpus problem");
  SolverConfig cfg;
  cfg.max_iters = 100000;
  for (const ProblemSpec& spec : default_corpus()) {
    if (!spec.convex || !spec.bounded_level_set) continue;
    const RunTrace trace = run_nsdm(*spec.oracle, spec.x0, cfg);
    double min_norm = trace.records.front().subgrad_norm;
    for (const IterationRecord& r : trace.records) {
      min_norm = std::min(min_norm, r.subgrad_norm);
    }
    c.require(min_norm <= 1e-8, spec.id + ": min ||v_n|| = " + fmt(min_norm));
  }
}

void criterion_8_verifier_soundness() {
  Criterion& c = begin(8,
                       "membership verifier accepts the true slope and rejects a "
                       "false one; prox-regularity threshold of the concave "
                       "paraboloid");
  const ConvexQuadraticOracle square("square", Matrix::diagonal({2.0}), Vector{0.0}, 0.0);
  SamplingPlan plan;
  plan.num_points = 2000;
  plan.seed = 42;
  plan.radius = 0.5;
  c.require(check_prox_subgradient(square, Vector{1.0}, Vector{2.0}, 0.0, plan).passed,
            "true gradient rejected");

  plan.radius = 0.1;
  const Certificate reject =
      check_prox_subgradient(square, Vector{1.0}, Vector{3.0}, 1.0, plan);
  c.require(!reject.passed, "wrong slope accepted");
  c.require(!reject.violations.empty(), "no witness recorded");
  if (!reject.violations.empty()) {
    const Vector& y = reject.violations.front().witness.front().value;
    const double e = y[0] - 1.0;
    const double residual = y[0] * y[0] - 1.0 - 3.0 * e + 0.5 * e * e;
    c.require(residual < -1e-10 * 2.0, "witness does not reproduce the failure");
  }

  const SmoothOracle neg(
      "neg_sqnorm", 2, [](const Vector& x) { return -dot(x, x); },
      [](const Vector& x) { return scale(-2.0, x); }, false);
  SamplingPlan rplan;
  rplan.num_points = 2000;
  rplan.seed = 42;
  const Vector center{0.0, 0.0};
  c.require(check_prox_regularity(neg, center, 1.0, 2.5, rplan).passed,
            "concave paraboloid should be prox-regular at L=2.5");
  const Certificate rfail = check_prox_regularity(neg, center, 1.0, 1.0, rplan);
  c.require(!rfail.passed, "L=1 should fail on the concave paraboloid");
  if (!rfail.violations.empty()) {
    const Violation& v = rfail.violations.front();
    const Vector step = subtract(v.witness[1].value, v.witness[0].value);
    const double expected = 0.5 * (1.0 - 2.0) * dot(step, step);
    c.require(std::abs(v.gap - expected) <= 1e-9 * (1.0 + std::abs(expected)),
              "residual identity ((L-2)/2)||y'-y||^2 not reproduced");
  } else {
    c.require(false, "no witness recorded for the prox-regularity failure");
  }
}

void criterion_9_sdm_nsdm_equivalence() {
  Criterion& c = begin(9,
                       "identical SDM and NSDM iterate sequences on every "
                       "singleton-descriptor corpus problem");
  SolverConfig cfg;
  cfg.max_iters = 2000;
  for (const ProblemSpec& spec : default_corpus()) {
    const FunctionClass fc = spec.oracle->function_class();
    if (fc != FunctionClass::Smooth && fc != FunctionClass::ConvexQuadratic) continue;
    const RunTrace a = run_nsdm(*spec.oracle, spec.x0, cfg);
    const RunTrace b = run_sdm(*spec.oracle, spec.x0, cfg);
    if (a.records.size() != b.records.size()) {
      c.require(false, spec.id + ": different trace lengths");
      continue;
    }
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      const IterationRecord& ra = a.records[i];
      const IterationRecord& rb = b.records[i];
      bool same = ra.status == rb.status && std::abs(ra.f_value - rb.f_value) <= 1e-14 &&
                  std::abs(ra.subgrad_norm - rb.subgrad_norm) <= 1e-14 &&
                  std::abs(ra.step_length - rb.step_length) <= 1e-14;
      if (ra.x && rb.x) {
        for (std::size_t k = 0; k < ra.x->dim(); ++k) {
          same = same && std::abs((*ra.x)[k] - (*rb.x)[k]) <= 1e-14;
        }
      }
      if (!same) {
        c.require(false, spec.id + ": records diverge at iteration " + std::to_string(i));
        break;
      }
    }
  }
}

void criterion_10_determinism() {
  Criterion& c = begin(10,
                       "byte-identical bench CSV and run summary JSON across "
                       "repeated invocations");
  const fs::path dir =
      fs::temp_directory_path() / ("nsdm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::string bench_cfg = (dir / "bench.json").string();
  write_text_file(bench_cfg,
                  std::string("{\"problems\": \"default\", \"output\": {\"summary\": \"") +
                      (dir / "bench_out.csv").string() + "\"}}");
  std::string first;
  for (int round = 0; round < 2; ++round) {
    const int rc = cli::cmd_bench(bench_cfg);
    c.require(rc == 0, "bench exit code " + std::to_string(rc));
    const std::string csv = read_text_file((dir / "bench_out.csv").string());
    if (round == 0) {
      first = csv;
      c.require(csv.find("rosenbrock,nsdm") != std::string::npos,
                "bench CSV missing the rosenbrock row");
    } else {
      c.require(csv == first, "bench CSV differs between runs");
    }
  }

  const std::string run_cfg = (dir / "run.json").string();
  write_text_file(
      run_cfg,
      std::string("{\"problem\": {\"id\": \"l2_quadratic\", \"dim\": 10, \"seed\": 7}, ") +
          "\"output\": {\"report\": \"" + (dir / "run_out.json").string() + "\"}}");
  std::string first_json;
  for (int round = 0; round < 2; ++round) {
    const int rc = cli::cmd_run(run_cfg);
    c.require(rc == 0, "run exit code " + std::to_string(rc));
    const std::string j = read_text_file((dir / "run_out.json").string());
    if (round == 0) {
      first_json = j;
    } else {
      c.require(j == first_json, "run summary JSON differs between runs");
    }
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  criterion_1_one_step_translation();
  criterion_2_lipschitz_constant();
  criterion_3_strict_convex_quadratic();
  criterion_4_nonsmooth_convex();
  criterion_5_descent_bound();
  criterion_6_monotone_descent_and_confinement();
  criterion_7_subgradient_decay();
  criterion_8_verifier_soundness();
  criterion_9_sdm_nsdm_equivalence();
  criterion_10_determinism();

  int failed = 0;
  for (const Criterion& c : g_results) {
    std::printf("criterion %2d [%s]: %s\n", c.number, c.passed ? "PASS" : "FAIL",
                c.description.c_str());
    for (const std::string& f : c.failures) {
      std::printf("              - %s\n", f.c_str());
    }
    if (!c.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
              g_results.size());
  return failed;
}
