#include <iostream>

#include "symsing/cli.hpp"

int main(int argc, char** argv) { return symsing::run_cli(argc, argv, std::cout, std::cerr); }
