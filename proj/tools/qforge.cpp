#include <iostream>

#include "qforge/cli/cli.hpp"

int main(int argc, char** argv) { return qforge::cli::run(argc, argv, std::cout, std::cerr); }
