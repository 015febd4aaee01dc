#include <iostream>

#include "fanopoly/cli.hpp"

int main(int argc, char** argv) {
    return fanopoly::cli::run_main(argc, argv, std::cin, std::cout, std::cerr);
}
