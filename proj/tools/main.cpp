#include <iostream>

#include "dqwifi/cli.hpp"

int main(int argc, char** argv) {
  return dqwifi::cli::run(argc, argv, std::cout, std::cerr);
}
