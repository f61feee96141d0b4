#include <iostream>
#include <string>
#include <vector>

#include "capstan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return capstan::run_cli(args, std::cout, std::cerr);
}
