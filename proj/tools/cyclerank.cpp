#include <iostream>

#include "cyclerank/cli.hpp"

int main(int argc, char** argv) {
  return cyclerank::run_cli(argc, argv, std::cout, std::cerr);
}
