#include <iostream>

#include "qcor/cli.hpp"

int main(int argc, char** argv) { return qcor::cli::run(argc, argv, std::cout, std::cerr); }
