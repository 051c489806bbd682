#include <string>
#include <vector>

#include "ecograde/cli/commands.hpp"

int main(int argc, char** argv) {
    return ecograde::run_cli(std::vector<std::string>(argv, argv + argc));
}
