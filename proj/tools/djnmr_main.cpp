#include "djnmr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return djnmr::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
