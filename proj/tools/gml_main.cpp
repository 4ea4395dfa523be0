#include <iostream>

#include "gml/commands.hpp"

int main(int argc, char** argv) {
  return gml::run_cli(argc, argv, std::cout, std::cerr);
}
