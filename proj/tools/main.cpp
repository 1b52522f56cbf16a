#include "rtgrowth/cli.hpp"

int main(int argc, char** argv) { return rtg::run_cli(argc, argv); }
