#include <iostream>

#include "treeshift/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return treeshift::cli::run(args, std::cout, std::cerr);
}
