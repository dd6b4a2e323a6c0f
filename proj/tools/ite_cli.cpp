#include <iostream>

#include "ite/cli.hpp"

int main(int argc, char** argv) { return ite::cli::main_entry(argc, argv, std::cout, std::cerr); }
