#include "multibrot/cli.hpp"

int main(int argc, char** argv) { return multibrot::cli::run(argc, argv); }
