#include <iostream>

#include "tergm/cli.hpp"

int main(int argc, char** argv) { return tergm::dispatch(argc, argv, std::cout, std::cerr); }
