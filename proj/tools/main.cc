#include "pastplan/cli/cli.h"

int main(int argc, char** argv) { return pastplan::cli::run_cli(argc, argv); }
