#include <iostream>

#include "qdis/tools/cli.hpp"

int main(int argc, char** argv) { return qdis::tools::run_cli(argc, argv, std::cout, std::cerr); }
