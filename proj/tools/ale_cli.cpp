#include "ale/harness/cli.hpp"

int main(int argc, char** argv) { return ale::harness::cli_dispatch(argc, argv); }
