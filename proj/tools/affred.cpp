#include <iostream>
#include <string>
#include <vector>

#include "affred/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return affred::run_cli(args, std::cout, std::cerr);
}
