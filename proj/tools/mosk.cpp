#include "cli.hpp"

int main(int argc, char** argv) { return mosk::cli::main_entry(argc, argv); }
