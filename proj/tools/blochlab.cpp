#include "blochlab/cli.hpp"

int main(int argc, char** argv) { return blochlab::cli::run(argc, argv); }
