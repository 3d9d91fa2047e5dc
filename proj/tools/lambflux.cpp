#include "lambflux/cli.hpp"

int main(int argc, char** argv) { return lambflux::cli::run(argc, argv); }
