#include <iostream>

#include "halo/cli/cli.hpp"

int main(int argc, char** argv) { return halo::cli::run_command(argc, argv, std::cout, std::cerr); }
