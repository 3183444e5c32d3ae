#include <iostream>

#include "mklock/cli.hpp"

int main(int argc, char** argv) { return mklock::run_cli(argc, argv, std::cout, std::cerr); }
