#include <iostream>

#include "confdirac_cli.hpp"

int main(int argc, char** argv) { return confdirac::cli::run_cli(argc, argv, std::cout, std::cerr); }
