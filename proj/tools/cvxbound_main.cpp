#include <iostream>

#include "cvxbound/cli.hpp"

int main(int argc, char** argv) { return cvxbound::run_cli(argc, argv, std::cout, std::cerr); }
