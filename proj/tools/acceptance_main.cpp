#include <iostream>
#include <string>

#include "opcalc/acceptance.hpp"

// One PASS/FAIL line per criterion; optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  if (ids.empty()) ids = opcalc::acceptance_ids();
  int failed = 0;
  for (int id : ids) {
    auto r = opcalc::run_criterion(id);
    std::cout << opcalc::result_line(r) << std::endl;
    if (!r.ok) ++failed;
  }
  std::cout << (failed ? "FAIL" : "PASS") << ": " << ids.size() - std::size_t(failed) << "/" << ids.size() << " criteria" << std::endl;
  return failed ? 1 : 0;
}
