#include "s25/cli.hpp"

int main(int argc, char** argv) { return s25::run_cli(argc, argv); }
