#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return spin_stirling::cli::run(argc, argv, std::cout, std::cerr); }
