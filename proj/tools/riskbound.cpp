#include <iostream>

#include "riskbound/cli.hpp"

int main(int argc, char** argv) {
  return riskbound::cli::run_cli(argc, argv, std::cout, std::cerr);
}
