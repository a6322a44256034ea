#include <iostream>

#include "gnutellab/cli.hpp"

int main(int argc, char** argv) { return gnutellab::cli::run(argc, argv, std::cout, std::cerr); }
