#include <iostream>
#include <string>
#include <vector>

#include "brl/cli.hpp"
#include "brl/parallel.hpp"

int main(int argc, char** argv) {
  brl::configure_threads_from_env();
  std::vector<std::string> args(argv + 1, argv + argc);
  return brl::cli::run(args, std::cout, std::cerr);
}
