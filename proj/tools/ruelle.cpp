#include <iostream>

#include "ruelle/cli.hpp"

int main(int argc, char** argv) { return ruelle::run_cli(argc, argv, std::cout, std::cerr); }
