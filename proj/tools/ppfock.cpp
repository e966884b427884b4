#include "ppfock/cli.hpp"

int main(int argc, char** argv) { return ppfock::cli::main(argc, argv); }
