#include "tropo/cli.hpp"

int main(int argc, char** argv) { return tropo::cli::main(argc, argv); }
