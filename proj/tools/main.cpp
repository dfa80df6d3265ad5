#include "compacton/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return compacton::main_entry(argc, argv, std::cout, std::cerr); }
