#include "nsdm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsdm/descent.hpp"
#include "nsdm/io.hpp"
#include "nsdm/linalg.hpp"
#include "nsdm/problems.hpp"
#include "nsdm/verify.hpp"

namespace nsdm::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Strict config parsing: unknown keys are rejected everywhere.
// ---------------------------------------------------------------------------

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError(where + ": expected a JSON object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

json load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of numbers");
  }
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return Vector(std::move(v));
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of rows");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ConfigError(where + ": expected rows as arrays");
    rows.push_back(r.get<std::vector<double>>());
  }
  return Matrix::from_rows(rows);
}

ProblemSpec problem_from_json(const json& j, const Overrides& ov) {
  if (!j.is_object() || !j.contains("id")) {
    throw ConfigError("problem: missing 'id'");
  }
  const std::string id = j.at("id").get<std::string>();

  if (id.starts_with("corpus:")) {
    require_keys(j, {"id"}, "problem");
    const std::string name = id.substr(7);
    for (ProblemSpec& spec : default_corpus()) {
      if (spec.id == name) return std::move(spec);
    }
    throw ConfigError("problem: no corpus entry named '" + name + "'");
  }

  if (id == "l2_quadratic") {
    require_keys(j, {"id", "dim", "seed", "y"}, "problem");
    if (j.contains("y")) {
      return make_l2_quadratic(vector_from_json(j.at("y"), "problem.y"));
    }
    const auto dim = j.value("dim", std::size_t{10});
    const auto seed = ov.seed.value_or(j.value("seed", std::uint64_t{7}));
    return make_l2_quadratic(dim, seed);
  }
  if (id == "strictly_convex_quadratic") {
    require_keys(j, {"id", "A", "b", "c", "x0"}, "problem");
    return make_strictly_convex_quadratic(
        matrix_from_json(j.at("A"), "problem.A"),
        vector_from_json(j.at("b"), "problem.b"), j.value("c", 0.0),
        vector_from_json(j.at("x0"), "problem.x0"));
  }
  if (id == "max_affine") {
    require_keys(j, {"id", "pieces", "quadratic_weight", "x0"}, "problem");
    std::vector<MaxAffineOracle::Piece> pieces;
    if (!j.contains("pieces") || !j.at("pieces").is_array()) {
      throw ConfigError("problem: max_affine requires a 'pieces' array");
    }
    for (const auto& p : j.at("pieces")) {
      require_keys(p, {"a", "b"}, "problem.pieces[]");
      pieces.push_back({vector_from_json(p.at("a"), "problem.pieces[].a"),
                        p.value("b", 0.0)});
    }
    return make_max_affine(std::move(pieces), j.value("quadratic_weight", 0.0),
                           vector_from_json(j.at("x0"), "problem.x0"));
  }
  if (id == "l1_composite") {
    require_keys(j, {"id", "lambda", "A", "b", "x0"}, "problem");
    return make_l1_composite(j.value("lambda", 1.0),
                             matrix_from_json(j.at("A"), "problem.A"),
                             vector_from_json(j.at("b"), "problem.b"),
                             vector_from_json(j.at("x0"), "problem.x0"));
  }
  if (id == "rosenbrock") {
    require_keys(j, {"id", "x0"}, "problem");
    Vector x0{-1.2, 1.0};
    if (j.contains("x0")) x0 = vector_from_json(j.at("x0"), "problem.x0");
    return make_smooth_nonconvex("rosenbrock", std::move(x0));
  }
  throw ConfigError("problem: unknown id '" + id + "'");
}

const std::set<std::string> kTopLevelKeys = {
    "problem", "problems", "solver",        "tol_subgrad", "max_iters", "t_max",
    "tol_t",   "verify",   "selection_rule", "probe_epsilon", "store_iterates",
    "output"};

SolverConfig solver_config_from_json(const json& root, const Overrides& ov) {
  SolverConfig cfg;
  cfg.tol_subgrad = ov.tol_subgrad.value_or(root.value("tol_subgrad", cfg.tol_subgrad));
  cfg.max_iters = ov.max_iters.value_or(root.value("max_iters", cfg.max_iters));
  cfg.t_max = root.value("t_max", cfg.t_max);
  cfg.tol_t = root.value("tol_t", cfg.tol_t);
  if (root.contains("selection_rule")) {
    const std::string rule = root.at("selection_rule").get<std::string>();
    if (rule == "min_norm") {
      cfg.selection_rule = SelectionRule::MinNorm;
    } else if (rule == "first_generator") {
      cfg.selection_rule = SelectionRule::FirstGenerator;
    } else {
      throw ConfigError("config: unknown selection_rule '" + rule + "'");
    }
  }
  if (root.contains("probe_epsilon")) {
    cfg.probe_epsilon = root.at("probe_epsilon").get<double>();
  }
  if (root.contains("store_iterates")) {
    cfg.store_iterates = root.at("store_iterates").get<bool>();
  }
  cfg.validate();
  return cfg;
}

std::string solver_name_from_json(const json& root) {
  const std::string solver = root.value("solver", "nsdm");
  if (solver != "nsdm" && solver != "sdm") {
    throw ConfigError("config: solver must be 'nsdm' or 'sdm'");
  }
  return solver;
}

json output_section(const json& root) {
  if (!root.contains("output")) return json::object();
  const json& out = root.at("output");
  require_keys(out, {"trace", "report", "plot", "summary"}, "output");
  return out;
}

int exit_code_for(IterStatus status) {
  switch (status) {
    case IterStatus::TerminatedZeroSubgradient:
    case IterStatus::TerminatedTolerance:
      return 0;
    case IterStatus::MaxIterations:
      return 2;
    case IterStatus::LineSearchStall:
      return 4;
    case IterStatus::Continued:
      break;
  }
  return 1;
}

RunTrace run_solver(const std::string& solver, const ProblemSpec& spec,
                    const SolverConfig& cfg) {
  if (solver == "sdm") {
    return run_sdm(*spec.oracle, spec.x0, cfg);
  }
  return run_nsdm(*spec.oracle, spec.x0, cfg);
}

// ---------------------------------------------------------------------------
// verify requests
// ---------------------------------------------------------------------------

Certificate execute_verify_request(const json& req, const ProblemSpec& spec,
                                   const SolverConfig& cfg) {
  if (!req.contains("kind")) throw ConfigError("verify[]: missing 'kind'");
  const std::string kind = req.at("kind").get<std::string>();
  const ObjectiveOracle& oracle = *spec.oracle;

  if (kind == "prox_subgradient") {
    require_keys(req, {"kind", "x", "zeta", "r", "radius", "num_points", "seed"},
                 "verify[prox_subgradient]");
    SamplingPlan plan;
    plan.radius = req.value("radius", 1.0);
    plan.num_points = req.value("num_points", std::size_t{2000});
    plan.seed = req.value("seed", std::uint64_t{42});
    return check_prox_subgradient(oracle, vector_from_json(req.at("x"), "verify.x"),
                                  vector_from_json(req.at("zeta"), "verify.zeta"),
                                  req.value("r", 0.0), plan);
  }
  if (kind == "prox_regularity") {
    require_keys(req, {"kind", "center", "delta", "L", "num_points", "seed"},
                 "verify[prox_regularity]");
    SamplingPlan plan;
    plan.num_points = req.value("num_points", std::size_t{2000});
    plan.seed = req.value("seed", std::uint64_t{42});
    Vector center = req.contains("center")
                        ? vector_from_json(req.at("center"), "verify.center")
                        : spec.x0;
    return check_prox_regularity(oracle, center, req.value("delta", 1.0),
                                 req.value("L", 1.0), plan);
  }
  if (kind == "subdiff_lipschitz") {
    require_keys(req,
                 {"kind", "delta", "L", "num_points", "seed", "level_samples",
                  "level_radius"},
                 "verify[subdiff_lipschitz]");
    SamplingPlan plan;
    plan.num_points = req.value("num_points", std::size_t{2000});
    plan.seed = req.value("seed", std::uint64_t{42});
    double level_radius = req.value("level_radius", 0.0);
    if (level_radius <= 0.0) {
      const auto it = spec.declared_constants.find("R");
      level_radius = (it != spec.declared_constants.end()) ? it->second : 5.0;
    }
    const auto omega = sample_level_set(oracle, spec.x0, level_radius,
                                        req.value("level_samples", std::size_t{50}),
                                        plan.seed + 1);
    return check_subdiff_lipschitz(oracle, omega, req.value("delta", 0.5),
                                   req.value("L", 1.0), plan);
  }
  if (kind == "hessian_bounds") {
    require_keys(req, {"kind", "m", "M", "seed"}, "verify[hessian_bounds]");
    return check_hessian_bounds(oracle, req.value("m", 0.0), req.value("M", 1.0),
                                req.value("seed", std::uint64_t{42}));
  }
  if (kind == "fd_gradient") {
    require_keys(req, {"kind", "x", "h"}, "verify[fd_gradient]");
    Vector x = req.contains("x") ? vector_from_json(req.at("x"), "verify.x") : spec.x0;
    return finite_difference_gradient_check(oracle, x, req.value("h", 1e-4));
  }
  if (kind == "descent_bound") {
    require_keys(req, {"kind", "L", "epsilon"}, "verify[descent_bound]");
    double L = req.value("L", 0.0);
    if (L <= 0.0) {
      const auto it = spec.declared_constants.find("L");
      if (it == spec.declared_constants.end()) {
        throw ConfigError("verify[descent_bound]: no L given and none declared");
      }
      L = it->second;
    }
    const RunTrace trace = run_nsdm(oracle, spec.x0, cfg);
    return descent_bound_report(trace, L, req.value("epsilon", 0.1));
  }
  throw ConfigError("verify[]: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchRow {
  std::string problem;
  std::string solver;
  std::size_t iterations = 0;
  double final_f = 0.0;
  double final_subgrad_norm = 0.0;
  std::uint64_t oracle_evals = 0;
  double wall_time_ms = 0.0;
  IterStatus termination = IterStatus::Continued;
};

std::string bench_csv(const std::vector<BenchRow>& rows, bool timing) {
  std::string out = "problem,solver,iterations,final_f,final_subgrad_norm,oracle_evals";
  if (timing) out += ",wall_time_ms";
  out += "\n";
  for (const BenchRow& r : rows) {
    out += r.problem + "," + r.solver + "," + std::to_string(r.iterations) + "," +
           format_double(r.final_f) + "," + format_double(r.final_subgrad_norm) + "," +
           std::to_string(r.oracle_evals);
    if (timing) out += "," + format_double(r.wall_time_ms);
    out += "\n";
  }
  return out;
}

}  // namespace

int cmd_run(const std::string& config_path, const Overrides& ov) {
  try {
    const json root = load_config(config_path);
    require_keys(root, kTopLevelKeys, "config");
    if (!root.contains("problem")) throw ConfigError("config: missing 'problem'");
    const ProblemSpec spec = problem_from_json(root.at("problem"), ov);
    const SolverConfig cfg = solver_config_from_json(root, ov);
    const std::string solver = solver_name_from_json(root);
    const json out = output_section(root);

    const RunTrace trace = run_solver(solver, spec, cfg);

    if (out.contains("trace")) {
      write_text_file(out.at("trace").get<std::string>(), trace_to_csv(trace));
    }
    if (out.contains("report")) {
      json summary = run_summary_json(trace, spec.id, solver);
      if (cfg.probe_epsilon && trace.records.size() >= 2) {
        const auto it = spec.declared_constants.find("L");
        if (it != spec.declared_constants.end()) {
          summary["descent_bound"] = certificate_json(
              descent_bound_report(trace, it->second, *cfg.probe_epsilon));
        }
      }
      write_text_file(out.at("report").get<std::string>(), summary.dump(2) + "\n");
    }
    if (out.contains("plot")) {
      write_text_file(out.at("plot").get<std::string>(),
                      trace_to_svg(trace, spec.id + " (" + solver + ")"));
    }

    std::cerr << spec.id << " [" << solver << "] " << iter_status_name(trace.termination)
              << " iters=" << trace.records.size() - 1
              << " f=" << format_double(trace.records.back().f_value)
              << " |v|=" << format_double(trace.records.back().subgrad_norm);
    if (ov.timing) {
      std::cerr << " wall_ms=" << trace.wall_time.count() * 1e3;
    }
    std::cerr << "\n";
    return exit_code_for(trace.termination);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& config_path, const Overrides& ov) {
  try {
    const json root = load_config(config_path);
    require_keys(root, kTopLevelKeys, "config");
    if (!root.contains("problem")) throw ConfigError("config: missing 'problem'");
    if (!root.contains("verify") || !root.at("verify").is_array() ||
        root.at("verify").empty()) {
      throw ConfigError("config: 'verify' must be a non-empty array");
    }
    const ProblemSpec spec = problem_from_json(root.at("problem"), ov);
    const SolverConfig cfg = solver_config_from_json(root, ov);
    const json out = output_section(root);

    std::vector<Certificate> certs;
    for (const json& req : root.at("verify")) {
      certs.push_back(execute_verify_request(req, spec, cfg));
    }

    const json report = verify_report_json(spec.id, certs);
    if (out.contains("report")) {
      write_text_file(out.at("report").get<std::string>(), report.dump(2) + "\n");
    } else {
      std::cout << report.dump(2) << "\n";
    }

    bool all = true;
    for (const Certificate& c : certs) {
      std::cerr << certificate_kind_name(c.kind) << ": "
                << (c.passed ? "passed" : "FAILED") << " (" << c.samples_tested
                << " samples)\n";
      all = all && c.passed;
    }
    return all ? 0 : 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_bench(const std::string& config_path, const Overrides& ov) {
  try {
    const json root = load_config(config_path);
    require_keys(root, kTopLevelKeys, "config");
    const SolverConfig cfg = solver_config_from_json(root, ov);
    const json out = output_section(root);

    std::vector<ProblemSpec> specs;
    if (!root.contains("problems")) {
      throw ConfigError("config: bench requires 'problems'");
    }
    const json& problems = root.at("problems");
    if (problems.is_string() && problems.get<std::string>() == "default") {
      specs = default_corpus();
    } else if (problems.is_array()) {
      for (const json& p : problems) specs.push_back(problem_from_json(p, ov));
    } else {
      throw ConfigError("config: 'problems' must be an array or \"default\"");
    }
    if (specs.empty()) throw ConfigError("config: bench problem list is empty");

    struct Task {
      const ProblemSpec* spec;
      const char* solver;
    };
    std::vector<Task> tasks;
    for (const ProblemSpec& s : specs) {
      tasks.push_back({&s, "nsdm"});
      const FunctionClass c = s.oracle->function_class();
      if (c == FunctionClass::Smooth || c == FunctionClass::ConvexQuadratic) {
        tasks.push_back({&s, "sdm"});
      }
    }

    std::vector<BenchRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size() || failed.load()) break;
        try {
          const RunTrace trace = run_solver(tasks[i].solver, *tasks[i].spec, cfg);
          const IterationRecord& last = trace.records.back();
          rows[i] = BenchRow{tasks[i].spec->id,
                             tasks[i].solver,
                             trace.records.size() - 1,
                             last.f_value,
                             last.subgrad_norm,
                             last.oracle_evals,
                             trace.wall_time.count() * 1e3,
                             trace.termination};
        } catch (const Error& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    };

    const std::size_t jobs = std::max<std::size_t>(1, ov.jobs.value_or(1));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < std::min(jobs, tasks.size()); ++k) {
        pool.emplace_back(worker);
      }
      for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw ConfigError("bench: " + first_error);

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
      return std::tie(a.problem, a.solver) < std::tie(b.problem, b.solver);
    });
    const std::string csv = bench_csv(rows, ov.timing);
    if (out.contains("summary")) {
      write_text_file(out.at("summary").get<std::string>(), csv);
    } else {
      std::cout << csv;
    }

    int code = 0;
    for (const BenchRow& r : rows) {
      code = std::max(code, exit_code_for(r.termination));
    }
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"nonsmooth proximal-subgradient steepest descent toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  double tol = 0.0;
  std::size_t max_iters = 0;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "path to the JSON config document")
        ->required();
    sub->add_option("--tol", tol, "override tol_subgrad");
    sub->add_option("--max-iters", max_iters, "override max_iters");
    sub->add_option("--seed", seed, "override the problem seed");
  };

  CLI::App* run = app.add_subcommand("run", "run one solver on one problem");
  add_common(run);
  run->add_flag("--timing", ov.timing, "report wall time on stderr");

  CLI::App* verify = app.add_subcommand("verify", "run hypothesis certificates");
  add_common(verify);

  CLI::App* bench = app.add_subcommand("bench", "run solvers across a problem list");
  add_common(bench);
  bench->add_option("--jobs", jobs, "worker threads");
  bench->add_flag("--timing", ov.timing, "append wall_time_ms to the summary CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (run->count("--tol") || verify->count("--tol") || bench->count("--tol")) {
    ov.tol_subgrad = tol;
  }
  if (run->count("--max-iters") || verify->count("--max-iters") ||
      bench->count("--max-iters")) {
    ov.max_iters = max_iters;
  }
  if (run->count("--seed") || verify->count("--seed") || bench->count("--seed")) {
    ov.seed = seed;
  }
  if (bench->count("--jobs")) {
    ov.jobs = jobs;
  }

  if (run->parsed()) return cmd_run(config_path, ov);
  if (verify->parsed()) return cmd_verify(config_path, ov);
  if (bench->parsed()) return cmd_bench(config_path, ov);
  return 1;
}

}  // namespace nsdm::cli
