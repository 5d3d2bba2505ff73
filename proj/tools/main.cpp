#include "altcfr/cli.hpp"

int main(int argc, char** argv) { return altcfr::cli_main(argc, argv); }
