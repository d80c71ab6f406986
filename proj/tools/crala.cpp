#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "crala/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* mode = std::getenv("CRALA_COLOR");
  bool color = (mode == nullptr || std::string(mode) != "never") && isatty(STDERR_FILENO) != 0;
  return crala::cli::run(args, std::cout, std::cerr, color);
}
