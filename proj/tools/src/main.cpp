#include "stainlab/cli.hpp"

int main(int argc, char** argv) { return stainlab::cli::run(argc, argv); }
