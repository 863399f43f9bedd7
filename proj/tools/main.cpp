#include "cli.hpp"

int main(int argc, char** argv) { return skewkrylov::cli::main(argc, argv); }
