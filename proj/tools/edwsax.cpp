#include "edwsax/cli.hpp"

int main(int argc, char** argv) { return edwsax::cli::run(argc, argv); }
