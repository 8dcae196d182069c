#include <iostream>

#include "trisep_cli/cli.hpp"

int main(int argc, char** argv) { return trisep::cli::run(argc, argv, std::cout, std::cerr); }
