#include <iostream>
#include <string>
#include <vector>

#include "acrc/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return acrc::cli::run(args, std::cout, std::cerr);
}
