#include "optikit/cli.hpp"

int main(int argc, char** argv) { return optikit::cli::main_entry(argc, argv); }
