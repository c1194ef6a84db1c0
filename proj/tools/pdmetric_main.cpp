#include <string>
#include <vector>

#include "pdm/bench.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pdm::cli_main(args);
}
