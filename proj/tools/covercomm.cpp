#include "covercomm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return covercomm::cli::run(argc, argv, std::cout, std::cerr); }
