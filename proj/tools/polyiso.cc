#include <iostream>
#include <string>
#include <vector>

#include "polyiso/cli.h"

int main(int argc, char **argv) {
  return polyiso::RunCli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
