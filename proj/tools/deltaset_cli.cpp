#include "deltaset/cli.hpp"

int main(int argc, char** argv) { return deltaset::cli::run(argc, argv, std::cout, std::cerr); }
