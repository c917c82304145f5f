#include "zt6g/cli.hpp"

int main(int argc, char** argv) { return zt6g::cli::run_cli(argc, argv); }
