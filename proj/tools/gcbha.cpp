#include <string>
#include <vector>

#include "gcbha/cli.hpp"

int main(int argc, char** argv) {
  return gcbha::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
