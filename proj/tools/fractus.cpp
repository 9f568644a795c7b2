#include <iostream>

#include "fractus/cli.hpp"

int main(int argc, char** argv) { return fractus::cli::run(argc, argv, std::cout, std::cerr); }
