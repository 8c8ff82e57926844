#include <vector>
#include <string>

#include "fracflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fracflow::cli::run(args);
}
