#include <iostream>

#include "hypsing/cli.hpp"

int main(int argc, char** argv) { return hypsing::run_cli(argc, argv, std::cout, std::cerr); }
