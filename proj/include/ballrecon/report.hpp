#pragma once

#include <string>
#include <vector>

namespace ballrecon {

// A checked inequality instance: names the relation and the numbers compared,
// never a bare boolean.
struct Verdict {
  std::string name;
  std::string inequality;  // e.g. "cover_limit <= 0.01"
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

Verdict make_verdict(std::string name, double lhs, const char* relation, double rhs,
                     double tolerance = 0.0);

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  std::string scenario;
  std::vector<CsvTable> tables;
  std::vector<Verdict> verdicts;
  double runtime_ms = 0.0;
};

bool all_pass(const RunReport& report);

// Shortest round-trippable decimal representation.
std::string format_double(double x);

// RFC-4180 quoting with LF line endings.
std::string csv_escape(const std::string& field);
std::string csv_render(const CsvTable& table);

// Writes <out_dir>/<scenario>_<table>.csv per table plus
// <out_dir>/<scenario>_verdicts.json. Runtimes go to the verdict file only so
// CSV bytes stay reproducible.
void emit_report(const RunReport& report, const std::string& out_dir);

}  // namespace ballrecon
