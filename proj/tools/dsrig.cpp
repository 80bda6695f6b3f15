#include "dsrig/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dsrig::cli::run(argc, argv, std::cout, std::cerr); }
