#include <iostream>
#include <string>
#include <vector>

#include "aodv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aodv::run_cli(args, std::cout, std::cerr);
}
