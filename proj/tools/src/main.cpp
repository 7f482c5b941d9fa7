#include "doseopt_cli/commands.hpp"

int main(int argc, char** argv) { return doseopt::cli::run_cli(argc, argv); }
