#include <string>
#include <vector>

#include "renewal/cli.hpp"

int main(int argc, char** argv) {
  return renewal::run(std::vector<std::string>(argv + 1, argv + argc));
}
