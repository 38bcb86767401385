#include <iostream>

#include "muscu/cli/commands.hpp"

int main(int argc, char** argv) { return muscu::cli::run(argc, argv, std::cout, std::cerr); }
