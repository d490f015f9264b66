#include <iostream>

#include "tal/cli.hpp"

int main(int argc, char** argv) {
    return tal::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
