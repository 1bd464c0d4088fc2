#include "brickforge/cli.hpp"

int main(int argc, char** argv) { return brickforge::run_cli(argc, argv); }
