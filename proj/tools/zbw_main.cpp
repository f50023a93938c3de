#include "zbw/cli.hpp"

int main(int argc, char** argv) { return zbw::cli::run(argc, argv); }
