#include <iostream>

#include "sudr/cli/cli.hpp"

int main(int argc, char** argv) { return sudr::cli::run(argc, argv, std::cout, std::cerr); }
