#include "commands.hpp"

int main(int argc, char** argv) { return cgp::cli::run(argc, argv); }
