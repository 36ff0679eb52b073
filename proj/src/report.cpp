#include "ballrecon/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ballrecon {

Verdict make_verdict(std::string name, double lhs, const char* relation, double rhs,
                     double tolerance) {
  Verdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  const std::string rel(relation);
  if (rel == "<=") {
    v.pass = lhs <= rhs + tolerance;
  } else if (rel == ">=") {
    v.pass = lhs >= rhs - tolerance;
  } else if (rel == "==") {
    v.pass = std::abs(lhs - rhs) <= tolerance;
  } else {
    throw std::invalid_argument("make_verdict: unknown relation " + rel);
  }
  v.inequality = format_double(lhs) + " " + rel + " " + format_double(rhs) +
                 (tolerance > 0.0 ? " (tol " + format_double(tolerance) + ")" : "");
  return v;
}

bool all_pass(const RunReport& report) {
  for (const Verdict& v : report.verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

std::string format_double(double x) {
  char buf[40];
  // Shortest representation that round-trips; %.17g always round-trips, try
  // shorter forms first.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x || (std::isnan(back) && std::isnan(x))) return buf;
  }
  return buf;
}

std::string csv_escape(const std::string& field) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string csv_render(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("csv_render: row width mismatch in table " + table.name);
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_report(const RunReport& report, const std::string& out_dir) {
  for (const CsvTable& t : report.tables) {
    const std::string path = out_dir + "/" + report.scenario + "_" + t.name + ".csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_report: cannot write " + path);
    f << csv_render(t);
  }
  nlohmann::json j;
  j["scenario"] = report.scenario;
  j["runtime_ms"] = report.runtime_ms;
  j["pass"] = all_pass(report);
  j["verdicts"] = nlohmann::json::array();
  for (const Verdict& v : report.verdicts) {
    j["verdicts"].push_back({{"name", v.name},
                             {"inequality", v.inequality},
                             {"lhs", v.lhs},
                             {"rhs", v.rhs},
                             {"pass", v.pass}});
  }
  const std::string path = out_dir + "/" + report.scenario + "_verdicts.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_report: cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace ballrecon
