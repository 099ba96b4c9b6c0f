#include <string>
#include <vector>

#include "hmcf/cli.hpp"

int main(int argc, char** argv) {
    return hmcf::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
