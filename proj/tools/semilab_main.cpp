#include "semilab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return semilab::cli::main_entry(argc, argv, std::cout, std::cerr);
}
