#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

// Usage: acceptance [--nsl-kdd FILE] [--parallel N] [criterion ids...]
int main(int argc, char** argv) {
  adbench::testing::AcceptanceOptions options;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--nsl-kdd" && i + 1 < argc) {
      options.nsl_kdd = argv[++i];
    } else if (arg == "--parallel" && i + 1 < argc) {
      options.parallel = std::stoul(argv[++i]);
    } else {
      ids.push_back(std::stoi(arg));
    }
  }
  const int failures = adbench::testing::run_acceptance(std::cout, options, ids);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
