#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return convexsum::cli::run(argc, argv, std::cout, std::cerr); }
