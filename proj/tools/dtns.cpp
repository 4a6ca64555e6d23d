/**
 * @file dtns.cpp
 * @brief Command-line front end; see `dtns --help`.
 */
#include <iostream>
#include <string>
#include <vector>

#include "dtns/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dtns::cli::run(args, std::cout, std::cerr);
}
