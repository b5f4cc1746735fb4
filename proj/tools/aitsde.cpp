#include <iostream>

#include "aitsde/cli.hpp"

int main(int argc, char** argv) { return aitsde::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
