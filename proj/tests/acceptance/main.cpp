#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "acceptance/suite.hpp"

// Usage: acceptance_tests [criterion ids...]; no ids runs all ten.
int main(int argc, char** argv) {
  int failures = 0;
  if (argc == 1) {
    std::ostringstream table;
    failures = acceptance::run_all(table, std::cout);
  } else {
    for (int k = 1; k < argc; ++k) {
      const acceptance::Result r = acceptance::run_criterion(std::atoi(argv[k]));
      std::cout << acceptance::format_line(r) << std::endl;
      failures += r.pass ? 0 : 1;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
