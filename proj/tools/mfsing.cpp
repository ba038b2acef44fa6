#include <iostream>
#include <string>
#include <vector>

#include "mfsing/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mfsing::cli::run(args, std::cout, std::cerr, std::cin);
}
