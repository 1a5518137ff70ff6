#include "airguard_cli.hpp"

int main(int argc, char** argv) { return airguard::cli::run_cli(argc, argv); }
