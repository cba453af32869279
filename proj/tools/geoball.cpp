#include "geoball/cli.hpp"

int main(int argc, char** argv) { return geoball::cli_main(argc, argv); }
