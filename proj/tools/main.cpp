#include <iostream>

#include "attain/cli.hpp"

int main(int argc, char** argv) { return attain::cli::run(argc, argv, std::cout, std::cerr); }
