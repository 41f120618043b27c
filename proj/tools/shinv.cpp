#include "shinv/cli.hpp"

int main(int argc, char **argv) { return shinv::cli::run(argc, argv); }
