#include "coldstart/cli.hpp"

int main(int argc, char** argv) { return coldstart::cli::run(argc, argv); }
