#include <iostream>
#include <string>
#include <vector>

#include "packs/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return packs::cli::dispatch(args, std::cout, std::cerr);
}
