#include <iostream>

#include "bonnet_cli/commands.hpp"

int main(int argc, char** argv) { return bonnet::cli::run_cli(argc, argv, std::cout, std::cerr); }
