#include <iostream>
#include <string>
#include <vector>

#include "logforms/cli.hpp"

int main(int argc, char** argv) {
  return logforms::cli::main_entry(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
