#include <iostream>

#include "dpsignal/cli.hpp"

int main(int argc, char** argv) {
  return dpsignal::run_cli(argc, argv, std::cout, std::cerr);
}
