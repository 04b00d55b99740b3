#include <iostream>

#include "sagesimplex/cli.hpp"

int main(int argc, char** argv) { return sagesimplex::cli::run(argc, argv, std::cout, std::cerr); }
