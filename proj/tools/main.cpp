#include <string>
#include <vector>

#include "povmic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return povmic::run_cli(args);
}
