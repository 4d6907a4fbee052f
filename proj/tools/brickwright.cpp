#include <iostream>
#include <string>
#include <vector>

#include "brickwright/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return brickwright::run_cli(args, std::cout, std::cerr);
}
