#include "projgeom/cli.hpp"

int main(int argc, char** argv) { return projgeom::cli::run(argc, argv); }
