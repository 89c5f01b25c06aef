#include <iostream>
#include <string>
#include <vector>

#include "sociallearn/cli.hpp"

int main(int argc, char** argv) {
  return sociallearn::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
