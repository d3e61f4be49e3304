#include <iostream>

#include "cubquad/cli.hpp"

int main(int argc, char** argv) { return cubquad::cli::main_entry(argc, argv, std::cout, std::cerr); }
