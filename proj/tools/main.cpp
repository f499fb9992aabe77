#include <iostream>

#include "fbounds/cli.hpp"

int main(int argc, char** argv) { return fbounds::run_cli(argc, argv, std::cout, std::cerr); }
