#include <iostream>

#include "causal/cli.hpp"

int main(int argc, char** argv) {
  return causal::run_cli(argc, argv, std::cout, std::cerr);
}
