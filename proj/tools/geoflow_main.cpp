#include "geoflow/cli.hpp"

int main(int argc, char** argv) { return geoflow::run_cli(argc, argv); }
