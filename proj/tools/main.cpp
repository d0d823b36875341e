#include <iostream>

#include "mmphflab/cli.hpp"

int main(int argc, char** argv) { return mmphflab::run_cli(argc, argv, std::cout, std::cerr); }
