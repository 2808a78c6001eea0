#include "hmsc/cli.hpp"

int main(int argc, char** argv) { return hmsc::run_cli(argc, argv); }
