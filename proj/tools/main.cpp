#include <iostream>
#include <string>
#include <vector>

#include "signet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return signet::run_cli(std::move(args), std::cout, std::cerr);
}
