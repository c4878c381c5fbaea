#include "cli.hpp"

int main(int argc, char** argv) { return noisewarp::cli::cli_main(argc, argv); }
