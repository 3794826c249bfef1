#include "graphbo/cli.hpp"

int main(int argc, char** argv) { return graphbo::run_cli(argc, argv); }
