#include "ssmi/cli.hpp"

int main(int argc, char** argv) { return ssmi::cli::run(argc, argv); }
