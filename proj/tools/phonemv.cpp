#include "phonemv/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return phonemv::cli::run_cli(argc, argv, std::cout, std::cerr);
}
