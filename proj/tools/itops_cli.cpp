#include <iostream>

#include "itops/cli.hpp"

int main(int argc, char** argv) { return itops::run_cli(argc, argv, std::cout, std::cerr); }
