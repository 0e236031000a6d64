#include <iostream>

#include "coexsim/cli.hpp"

int main(int argc, char **argv) {
  return coexsim::cli::run_cli(argc, argv, std::cout, std::cerr);
}
