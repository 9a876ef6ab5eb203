#include <iostream>

#include "decorr/cli.hpp"

int main(int argc, char** argv) {
    return decorr::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
