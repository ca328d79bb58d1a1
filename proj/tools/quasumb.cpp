#include <string>
#include <vector>

#include "quasumb/cli.hpp"

int main(int argc, char** argv) {
  return quasumb::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
