#include <iostream>

#include "pplnhom/commands.hpp"

int main(int argc, char** argv) { return pplnhom::cli::run(argc, argv, std::cout, std::cerr); }
