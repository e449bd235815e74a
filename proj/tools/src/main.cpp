#include <iostream>

#include "awaken/cli/commands.hpp"

int main(int argc, char** argv) { return awaken::cli::run(argc, argv, std::cout, std::cerr); }
