// discrepancy-lab CLI entry point.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "dlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        auto cmd = dlab::cli::parse(args);
        return dlab::cli::execute(cmd, std::cout, std::cerr);
    } catch (const dlab::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for the flag list\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
