#include <iostream>

#include "infonav/cli.hpp"

int main(int argc, char** argv) { return infonav::cli::run(argc, argv, std::cout, std::cerr); }
