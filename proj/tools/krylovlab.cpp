#include <iostream>
#include <string>
#include <vector>

#include "krylovlab/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return krylovlab::app::run_cli(args, std::cout, std::cerr);
}
