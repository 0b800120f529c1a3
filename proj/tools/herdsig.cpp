#include "cli/commands.hpp"

int main(int argc, char** argv) { return herdsig::cli::run(argc, argv); }
