#include "pulsetrain/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

// acceptance [name-or-number ...]
int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  double scale = 1.0;
  if (const char* s = std::getenv("PULSETRAIN_TOLERANCE_SCALE")) {
    scale = std::atof(s);
  }
  return pulsetrain::cli::run_checks(only, scale, std::cout, std::cerr);
}
