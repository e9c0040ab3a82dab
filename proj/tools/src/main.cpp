#include <iostream>

#include "pararank/cli.hpp"

int main(int argc, char** argv) {
  return pararank::cli::run_cli(argc, argv, std::cout, std::cerr);
}
