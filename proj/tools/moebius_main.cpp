#include "moebius/cli.hpp"

int main(int argc, char** argv) { return moebius::cli::main_entry(argc, argv); }
