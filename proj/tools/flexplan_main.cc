#include <iostream>

#include "flexplan/cli.h"

int main(int argc, char** argv) {
  return flexplan::Run(std::vector<std::string>(argv, argv + argc), std::cout,
                       std::cerr);
}
