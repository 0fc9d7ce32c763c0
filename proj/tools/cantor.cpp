#include "cantor/cli.hpp"

int main(int argc, char** argv) { return cantor::cli::run(argc, argv); }
