#include <iostream>

#include "heritage_twin/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return htwin::cli::run(std::move(args), std::cin, std::cout, std::cerr);
}
