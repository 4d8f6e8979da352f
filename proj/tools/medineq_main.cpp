#include <iostream>
#include <string>
#include <vector>

#include "medineq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return medineq::run_cli(args, std::cout, std::cerr);
}
