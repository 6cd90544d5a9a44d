#include "carl/cli.hpp"

int main(int argc, char** argv) { return carl::run_cli(argc, argv); }
