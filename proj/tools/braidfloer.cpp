#include <iostream>
#include <vector>

#include "bfh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bfh::cli::run(args, std::cout, std::cerr);
}
