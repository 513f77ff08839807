#include "nsdm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

namespace nsdm {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("trace CSV: malformed number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("trace CSV: malformed integer '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
  const bool with_x = !trace.records.empty() && trace.records.front().x.has_value();
  const std::size_t d = with_x ? trace.records.front().x->dim() : 0;

  std::string out = "iter,f,subgrad_norm,step_length,oracle_evals,status";
  for (std::size_t i = 0; i < d; ++i) out += ",x_" + std::to_string(i);
  out += "\n";

  for (const IterationRecord& r : trace.records) {
    out += std::to_string(r.n);
    out += ",";
    out += format_double(r.f_value);
    out += ",";
    out += format_double(r.subgrad_norm);
    out += ",";
    out += format_double(r.step_length);
    out += ",";
    out += std::to_string(r.oracle_evals);
    out += ",";
    out += iter_status_name(r.status);
    if (with_x) {
      for (std::size_t i = 0; i < d; ++i) {
        out += ",";
        out += format_double((*r.x)[i]);
      }
    }
    out += "\n";
  }
  return out;
}

RunTrace trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("trace CSV: missing header");
  }
  const std::vector<std::string> header = split_csv_line(line);
  constexpr std::size_t kFixed = 6;
  if (header.size() < kFixed || header[0] != "iter" || header[1] != "f" ||
      header[2] != "subgrad_norm" || header[3] != "step_length" ||
      header[4] != "oracle_evals" || header[5] != "status") {
    throw ConfigError("trace CSV: unexpected header");
  }
  const std::size_t d = header.size() - kFixed;

  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != kFixed + d) {
      throw ConfigError("trace CSV: row width does not match header");
    }
    IterationRecord rec;
    rec.n = static_cast<std::size_t>(parse_count(cells[0]));
    rec.f_value = parse_double(cells[1]);
    rec.subgrad_norm = parse_double(cells[2]);
    rec.step_length = parse_double(cells[3]);
    rec.oracle_evals = parse_count(cells[4]);
    rec.status = iter_status_from_name(cells[5]);
    if (d > 0) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = parse_double(cells[kFixed + i]);
      rec.x = Vector(std::move(x));
    }
    trace.records.push_back(std::move(rec));
  }
  if (trace.records.empty()) {
    throw ConfigError("trace CSV: no records");
  }
  trace.termination = trace.records.back().status;
  if (trace.records.back().x) trace.final_x = trace.records.back().x;
  return trace;
}

nlohmann::json run_summary_json(const RunTrace& trace, const std::string& problem_id,
                                const std::string& solver) {
  const IterationRecord& last = trace.records.back();
  nlohmann::json j;
  j["schema_version"] = 1;
  j["problem"] = problem_id;
  j["solver"] = solver;
  j["termination"] = std::string(iter_status_name(trace.termination));
  j["iterations"] = trace.records.size() - 1;
  j["final_f"] = last.f_value;
  j["final_subgrad_norm"] = last.subgrad_norm;
  j["oracle_evals"] = last.oracle_evals;
  if (last.x) {
    j["final_x"] = last.x->entries();
  }
  return j;
}

nlohmann::json certificate_json(const Certificate& cert) {
  nlohmann::json j;
  j["kind"] = std::string(certificate_kind_name(cert.kind));
  j["passed"] = cert.passed;
  j["one_sided"] = cert.one_sided;
  j["samples_tested"] = cert.samples_tested;
  j["estimated_constants"] = cert.estimated_constants;
  j["violations_total"] = cert.violations_total;
  nlohmann::json vio = nlohmann::json::array();
  for (const Violation& v : cert.violations) {
    nlohmann::json jv;
    jv["lhs"] = v.lhs;
    jv["rhs"] = v.rhs;
    jv["gap"] = v.gap;
    jv["note"] = v.note;
    nlohmann::json wit = nlohmann::json::array();
    for (const WitnessPoint& w : v.witness) {
      wit.push_back({{"role", w.role}, {"value", w.value.entries()}});
    }
    jv["witness"] = std::move(wit);
    vio.push_back(std::move(jv));
  }
  j["violations"] = std::move(vio);
  return j;
}

nlohmann::json verify_report_json(const std::string& problem_id,
                                  const std::vector<Certificate>& certs) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["problem"] = problem_id;
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const Certificate& c : certs) {
    all = all && c.passed;
    arr.push_back(certificate_json(c));
  }
  j["certificates"] = std::move(arr);
  j["all_passed"] = all;
  return j;
}

namespace {

struct Series {
  std::vector<double> xs;
  std::vector<double> ys;
};

std::string polyline(const Series& s, double x_lo, double x_hi, double y_lo, double y_hi,
                     double px, double py, double pw, double ph, const char* color) {
  if (s.xs.empty()) return "";
  const double xr = (x_hi > x_lo) ? (x_hi - x_lo) : 1.0;
  const double yr = (y_hi > y_lo) ? (y_hi - y_lo) : 1.0;
  std::string pts;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    const double cx = px + pw * (s.xs[i] - x_lo) / xr;
    const double cy = py + ph * (1.0 - (s.ys[i] - y_lo) / yr);
    pts += format_double(cx) + "," + format_double(cy) + " ";
  }
  std::string out = "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
  return out;
}

std::string panel(const Series& s, double px, double py, double pw, double ph,
                  const char* color, const std::string& label) {
  double y_lo = 0.0, y_hi = 1.0, x_lo = 0.0, x_hi = 1.0;
  if (!s.xs.empty()) {
    x_lo = *std::min_element(s.xs.begin(), s.xs.end());
    x_hi = *std::max_element(s.xs.begin(), s.xs.end());
    y_lo = *std::min_element(s.ys.begin(), s.ys.end());
    y_hi = *std::max_element(s.ys.begin(), s.ys.end());
  }
  std::string out;
  out += "<rect x=\"" + format_double(px) + "\" y=\"" + format_double(py) + "\" width=\"" +
         format_double(pw) + "\" height=\"" + format_double(ph) +
         "\" fill=\"none\" stroke=\"#999\"/>\n";
  out += polyline(s, x_lo, x_hi, y_lo, y_hi, px, py, pw, ph, color);
  out += "<text x=\"" + format_double(px + 4) + "\" y=\"" + format_double(py + 14) +
         "\" font-size=\"11\" font-family=\"monospace\">" + label +
         " [" + format_double(y_lo) + ", " + format_double(y_hi) + "]</text>\n";
  return out;
}

}  // namespace

std::string trace_to_svg(const RunTrace& trace, const std::string& title) {
  Series f_series;
  Series v_series;
  for (const IterationRecord& r : trace.records) {
    const double n = static_cast<double>(r.n);
    f_series.xs.push_back(n);
    f_series.ys.push_back(r.f_value);
    if (r.subgrad_norm > 0.0) {
      v_series.xs.push_back(n);
      v_series.ys.push_back(std::log10(r.subgrad_norm));
    }
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"480\" "
         "viewBox=\"0 0 880 480\">\n";
  svg += "<text x=\"16\" y=\"20\" font-size=\"13\" font-family=\"monospace\">" + title +
         "</text>\n";
  svg += panel(f_series, 40, 36, 800, 190, "#1f77b4", "f(x_n)");
  svg += panel(v_series, 40, 250, 800, 190, "#d62728", "log10 ||v_n||");
  svg += "<text x=\"420\" y=\"470\" font-size=\"11\" font-family=\"monospace\">iteration "
         "n</text>\n";
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw ConfigError("failed writing '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nsdm
