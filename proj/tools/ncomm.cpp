#include <iostream>

#include "ncomm/cli.hpp"

int main(int argc, char** argv) { return ncomm::run_cli(argc, argv, std::cout, std::cerr); }
