#include "cli.hpp"

int main(int argc, char** argv) { return glvortex::cli::main(argc, argv); }
