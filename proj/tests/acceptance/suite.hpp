#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

constexpr int kCriteria = 10;

/// Runs one criterion (1..10); failures to evaluate count as FAIL.
Result run_criterion(int id);

/// One line per criterion: "PASS|FAIL  <id>  <name>  (<seconds> s)  <detail>".
std::string format_line(const Result& r);

/// Runs every criterion: progress lines to log, CSV table
/// (criterion,name,pass,seconds,detail) to table. Returns the failure count.
int run_all(std::ostream& table, std::ostream& log);

}  // namespace acceptance
