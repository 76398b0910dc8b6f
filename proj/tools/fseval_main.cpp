#include "fseval/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  fseval::CliContext context;
  std::vector<std::string> args(argv + 1, argv + argc);
  return fseval::run_cli(args, context, std::cout, std::cerr);
}
