#include <iostream>

#include "qeswkb_tools/cli.hpp"

int main(int argc, char** argv) { return qeswkb::tools::run_cli(argc, argv, std::cout, std::cerr); }
