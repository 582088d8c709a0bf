#include <iostream>

#include "sbox/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sbox::run_cli(args, std::cout, std::cerr);
}
