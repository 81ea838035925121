#include <string>
#include <vector>

#include "semsub/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semsub::cli::run(args);
}
