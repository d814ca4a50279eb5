#include <iostream>
#include <string>
#include <vector>

#include "minimax_bid/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return minimax_bid::cli::run(args, std::cout, std::cerr);
}
