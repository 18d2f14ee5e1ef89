#include "tude/cli.hpp"

int main(int argc, char** argv) {
    return tude::run_cli(argc, argv);
}
