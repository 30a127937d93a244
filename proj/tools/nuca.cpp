#include "nuca/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nuca::cli::run(argc, argv, std::cout, std::cerr); }
