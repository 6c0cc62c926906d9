#include <iostream>
#include <string>
#include <vector>

#include "framec/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return framec::run_cli(args, std::cout, std::cerr);
}
