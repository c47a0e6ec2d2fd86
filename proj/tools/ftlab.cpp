#include "ftlab/harness/cli.hpp"

int main(int argc, char** argv) { return ftlab::harness::cli_main(argc, argv); }
