#include <iostream>
#include <string>
#include <vector>

#include "gantt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gantt::cli::run(args, std::cout, std::cerr);
}
