#include <iostream>
#include <string>
#include <vector>

#include "chemowave/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chemowave::parse_and_dispatch(args, std::cout, std::cerr);
}
