#include <iostream>

#include "pldoc/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return pldoc::cli::run(args, std::cout, std::cerr);
}
