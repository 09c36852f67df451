#include <iostream>
#include <string>
#include <vector>

#include "reprocheck/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return reprocheck::run_cli(args, std::cout, std::cerr);
}
