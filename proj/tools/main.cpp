#include "gorga/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gorga::run_cli(argc, argv, std::cout, std::cerr);
}
