#include "seirint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return seirint::run(args, std::cout, std::cerr);
}
