#include <iostream>
#include <string>
#include <vector>

#include "prodline/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return prodline::run_cli(args, std::cout, std::cerr);
}
