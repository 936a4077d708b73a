#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <vector>

#include "crspectra/verify.hpp"

// Usage: acceptance [id ...]; no ids runs every check.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  if (ids.empty()) {
    for (int id = 1; id <= crs::kCriterionCount; ++id) ids.push_back(id);
  }
  int failed = 0;
  for (int id : ids) {
    const crs::CriterionResult r = crs::run_criterion(id);
    std::cout << crs::format_result(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " passed" << std::endl;
  return failed ? 1 : 0;
}
