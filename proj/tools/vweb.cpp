#include "vweb/cli.hpp"

int main(int argc, char** argv) { return vweb::run_cli(argc, argv); }
