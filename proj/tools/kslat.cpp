#include <iostream>

#include "kslat/cli.hpp"

int main(int argc, char** argv) { return kslat::cli::run(argc, argv, std::cout, std::cerr); }
