#include <iostream>

#include "seqtag/cli.h"

int main(int argc, char** argv) {
  return seqtag::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
