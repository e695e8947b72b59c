#include <iostream>
#include <string>
#include <vector>

#include "invasion/sim_io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return invasion::cli_main(args, std::cout, std::cerr);
}
