#include "gridcast/cli.hpp"

int main(int argc, char** argv) { return gridcast::run_cli(argc, argv); }
