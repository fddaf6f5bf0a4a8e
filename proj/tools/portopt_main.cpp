#include "portopt/cli.hpp"

int main(int argc, char** argv) { return portopt::run_cli(argc, argv); }
