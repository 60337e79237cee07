#include "rkex/cli.hpp"

int main(int argc, char** argv) { return rkex::cli_dispatch(argc, argv); }
