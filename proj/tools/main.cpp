#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return cnflab::cli::run(argc, argv, std::cout, std::cerr);
}
