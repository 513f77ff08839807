#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nsdm/core.hpp"

namespace nsdm {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Trace CSV, columns `iter,f,subgrad_norm,step_length,oracle_evals,status`
/// plus `x_0..x_{d-1}` when the records carry iterates. Header row mandatory;
/// parsing a written trace reproduces the record sequence exactly.
std::string trace_to_csv(const RunTrace& trace);
RunTrace trace_from_csv(const std::string& csv);

nlohmann::json run_summary_json(const RunTrace& trace, const std::string& problem_id,
                                const std::string& solver);
nlohmann::json certificate_json(const Certificate& cert);
nlohmann::json verify_report_json(const std::string& problem_id,
                                  const std::vector<Certificate>& certs);

/// Self-contained SVG with f(x_n) and log10 ||v_n|| against the iteration
/// index; no plotting dependency.
std::string trace_to_svg(const RunTrace& trace, const std::string& title);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nsdm
