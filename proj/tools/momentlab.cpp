#include "momentlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return momentlab::cli::run(argc, argv, std::cout, std::cerr); }
