#include <iostream>
#include <string>
#include <vector>

#include "sqlp/session.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sqlp::run_batch(args, std::cin, std::cout, std::cerr);
}
