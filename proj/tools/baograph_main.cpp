#include <iostream>
#include <string>
#include <vector>

#include "bao/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return bao::run_cli(args, std::cout, std::cerr);
}
