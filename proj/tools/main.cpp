#include "stablefair/cli.hpp"

int main(int argc, char** argv) { return stablefair::run_cli(argc, argv); }
