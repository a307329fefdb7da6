#include <iostream>

#include "seqelim/cli.hpp"

int main(int argc, char** argv) { return seqelim::cli::run(argc, argv, std::cout, std::cerr); }
