#include "vendirl/cli.hpp"

int main(int argc, char** argv) { return vendirl::run_cli(argc, argv); }
