#include <iostream>

#include "qtwist/report.hpp"

int main(int argc, char** argv) { return qtwist::cli_main(argc, argv, std::cout, std::cerr); }
