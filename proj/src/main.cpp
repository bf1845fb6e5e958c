#include <iostream>

#include "onan/cli.hpp"

int main(int argc, char** argv) { return onan::run_cli(argc, argv, std::cout, std::cerr); }
