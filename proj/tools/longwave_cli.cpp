#include "longwave/cli_run.hpp"

int main(int argc, char** argv) { return longwave::run_cli(argc, argv); }
