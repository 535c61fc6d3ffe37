#include <iostream>
#include <string>
#include <vector>

#include "zdl/app.hpp"

int main(int argc, char** argv) {
  return zdl::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
