#include "ringflow/cli.hpp"

int main(int argc, char** argv) { return ringflow::cli::main(argc, argv); }
