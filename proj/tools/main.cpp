#include <iostream>

#include "softedit/cli.hpp"

int main(int argc, char** argv) { return softedit::run_cli(argc, argv, std::cout, std::cerr); }
