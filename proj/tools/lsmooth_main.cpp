#include <iostream>

#include "lsmooth/cli.hpp"

int main(int argc, char** argv) { return lsmooth::cli_main(argc, argv, std::cout, std::cerr); }
