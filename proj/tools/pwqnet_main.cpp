#include <string>
#include <vector>

#include "pwqnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pwqnet::run_cli(args);
}
