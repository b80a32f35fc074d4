#include <iostream>
#include <string>
#include <vector>

#include "tailcast/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tailcast::cli::run_cli(args, std::cout, std::cerr);
}
