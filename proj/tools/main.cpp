#include "cli.hpp"

int main(int argc, char** argv) { return kppca::cli::run(argc, argv); }
