#include "exoverse/cli.hpp"

int main(int argc, char** argv) { return exoverse::cli::run(argc, argv); }
