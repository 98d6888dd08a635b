#include "fracdq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fracdq::run_cli(argc, argv, std::cout, std::cerr); }
