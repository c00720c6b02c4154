#include <iostream>

#include "kronload/cli.hpp"

int main(int argc, char** argv) { return kronload::cli::run(argc, argv, std::cout, std::cerr); }
