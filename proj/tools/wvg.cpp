#include <iostream>

#include "wvg/cli.hpp"

int main(int argc, char** argv) { return wvg::cli::run(argc, argv, std::cout, std::cerr); }
