#include "heunpath/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return heunpath::cli::main_entry(argc, argv, std::cout, std::cerr);
}
