#include <iostream>

#include "phasereg_cli/cli.hpp"

int main(int argc, char** argv) {
  return phasereg::cli::run(argc, argv, std::cout, std::cerr);
}
