#include <iostream>

#include "qdecay/cli.hpp"

int main(int argc, char** argv)
{
    return qdecay::cli::run_cli(argc, argv, std::cout, std::cerr);
}
