#include <iostream>

#include "kickbound/cli.hpp"

int main(int argc, char** argv) { return kickbound::cli::run(argc, argv, std::cout, std::cerr); }
