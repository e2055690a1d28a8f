#include <iostream>
#include <string>
#include <vector>

#include "hcn/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hcn::cli::run(args, std::cout, std::cerr);
}
