#include <iostream>
#include <string>
#include <vector>

#include "bartree_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bartree::cli::cli_dispatch(args, std::cout, std::cerr);
}
