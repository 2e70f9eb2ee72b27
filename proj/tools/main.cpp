#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cantrans/simd/kernels.hpp"

int main(int argc, char** argv) {
  cantrans::simd::configure_from_environment();
  std::vector<std::string> args(argv + 1, argv + argc);
  return cantrans::cli::run(args, std::cout, std::cerr);
}
