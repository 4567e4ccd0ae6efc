#include "lcgf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lcgf::cli::run(argc, argv, std::cout, std::cerr); }
