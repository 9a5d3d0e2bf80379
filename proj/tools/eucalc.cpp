#include "eucalc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return eucalc::cli::run_command(argc, argv, std::cout, std::cerr); }
