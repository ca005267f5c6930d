#include <iostream>
#include <string>
#include <vector>

#include "vinberg/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vinberg::io::run_command(args, std::cout, std::cerr);
}
