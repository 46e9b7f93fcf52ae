#include <iostream>
#include <string>
#include <vector>

#include "multibrot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return multibrot::cli::run(args, std::cout, std::cerr);
}
