#include <iostream>
#include <string>
#include <vector>

#include "permbo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return permbo::cli::run(args, std::cout, std::cerr);
}
