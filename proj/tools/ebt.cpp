#include <iostream>
#include <string>
#include <vector>

#include "ebt/cli.hpp"

int main(int argc, char** argv) {
  const auto outcome = ebt::cli::run(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << outcome.out;
  std::cerr << outcome.err;
  return outcome.code;
}
