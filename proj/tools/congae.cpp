#include <iostream>

#include "congae/cli.hpp"

int main(int argc, char** argv) { return congae::run_cli(argc, argv, std::cout, std::cerr); }
