#include "mrse/cli.hpp"

int main(int argc, char **argv) {
    return mrse::cli::run(argc, argv);
}
