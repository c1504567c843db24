#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "sidonlab/acceptance.hpp"

// Usage: acceptance_runner [--quick] [--tamper] [id...]
int main(int argc, char** argv) {
  namespace acc = sidonlab::acceptance;
  acc::Options options;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick") {
      options.quick = true;
    } else if (arg == "--tamper") {
      options.tamper = true;
    } else {
      const int id = std::atoi(arg.c_str());
      if (id < 1 || id > acc::kCriteria) {
        std::cerr << "unknown criterion '" << arg << "'\n";
        return 2;
      }
      ids.push_back(id);
    }
  }
  std::vector<acc::Outcome> outcomes;
  if (ids.empty()) {
    outcomes = acc::run_all(options);
  } else {
    for (int id : ids) outcomes.push_back(acc::run_criterion(id, options));
  }
  bool all = true;
  for (const auto& o : outcomes) {
    std::cout << acc::format_line(o) << '\n';
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
