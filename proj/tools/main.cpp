#include <iostream>
#include <string>
#include <vector>

#include "priming/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return priming::run_cli(args, std::cout, std::cerr);
}
