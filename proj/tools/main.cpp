#include <string>
#include <vector>

#include "ancient_heat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ancient_heat::run_cli(args);
}
