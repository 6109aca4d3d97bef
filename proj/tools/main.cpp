#include <iostream>
#include <string>
#include <vector>

#include "msamp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return msamp::cli::run(args, std::cout, std::cerr);
}
