#include "coldmtc/cli.hpp"

int main(int argc, char** argv) { return coldmtc::cli::run(argc, argv); }
