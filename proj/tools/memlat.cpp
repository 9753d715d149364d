#include "memlat/cli.hpp"

int main(int argc, char** argv) { return memlat::cli::run(argc, argv); }
