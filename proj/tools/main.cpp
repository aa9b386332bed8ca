#include <iostream>

#include "smoothsc/cli.hpp"

int main(int argc, char** argv) { return smoothsc::cli_main(argc, argv, std::cout, std::cerr); }
