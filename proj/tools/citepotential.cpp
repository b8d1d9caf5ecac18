#include <iostream>

#include "citepotential/cli.hpp"

int main(int argc, char** argv) {
  return citepotential::cli::main_entry(argc, argv, std::cout, std::cerr);
}
