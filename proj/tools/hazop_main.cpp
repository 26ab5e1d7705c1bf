#include <iostream>

#include "hazop/cli.hpp"

int main(int argc, char** argv) {
  return hazop::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
