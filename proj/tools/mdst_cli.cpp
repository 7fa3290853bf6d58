#include <iostream>
#include <string>
#include <vector>

#include "mdst/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mdst::cli::run(args, std::cout, std::cerr);
}
