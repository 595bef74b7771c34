#include "turnpike/cli.hpp"

int main(int argc, char** argv) { return turnpike::cli::main(argc, argv); }
