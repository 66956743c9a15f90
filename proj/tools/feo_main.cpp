#include <string>
#include <vector>

#include "feo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return feo::run_cli(std::move(args));
}
