#include <iostream>

#include "vstar/cli.hpp"

int main(int argc, char** argv) { return vstar::run_cli(argc, argv, std::cout, std::cerr); }
