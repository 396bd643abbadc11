#include "mvda/cli.hpp"

int main(int argc, char** argv) { return mvda::cli::cli_main(argc, argv); }
