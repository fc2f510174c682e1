#include <iostream>

#include "pwlcycles_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pwl::cli::run(args, std::cout, std::cerr);
}
