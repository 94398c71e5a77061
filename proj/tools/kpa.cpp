#include "kpa/cli.hpp"

int main(int argc, char** argv) { return kpa::cli::run(argc, argv); }
