#include <iostream>

#include "monoslice/cli.hpp"

int main(int argc, char** argv) {
  return monoslice::run_cli({argv + 1, argv + argc}, std::cout, std::cerr, "run");
}
