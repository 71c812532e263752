#include <iostream>

#include "matrixfirst/cli.hpp"

int main(int argc, char** argv) { return matrixfirst::cli::run(argc, argv, std::cout, std::cerr); }
