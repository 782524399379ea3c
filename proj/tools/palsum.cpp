#include "palsum_cli.hpp"

int main(int argc, char** argv) { return palsum::cli::run(argc, argv); }
