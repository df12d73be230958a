#include <string>
#include <vector>

#include "wrw/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wrw::cli::run(args);
}
