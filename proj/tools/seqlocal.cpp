#include <iostream>

#include "seqlocal/cli.hpp"

int main(int argc, char** argv) { return seqlocal::run_cli(argc, argv, std::cout, std::cerr); }
