#include "degenlab/cli.hpp"

int main(int argc, char** argv) { return dgl::run_cli(argc, argv); }
