#include <iostream>

#include "hurst/cli.hpp"

int main(int argc, char** argv) { return hurst::run_cli(argc, argv, std::cout, std::cerr); }
