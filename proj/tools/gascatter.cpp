#include <iostream>
#include <string>
#include <vector>

#include "gascatter/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return gascatter::run_cli(args, std::cout, std::cerr);
}
