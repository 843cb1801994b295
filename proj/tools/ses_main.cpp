#include <iostream>

#include "ses/cli.hpp"

int main(int argc, char** argv) { return ses::cli::run(argc, argv, std::cout, std::cerr); }
