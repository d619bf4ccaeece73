#include "flowauction/cli.hpp"

int main(int argc, char** argv) { return flowauction::cli::run(argc, argv); }
