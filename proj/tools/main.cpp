#include <iostream>

#include "sgm_cli.hpp"

int main(int argc, char** argv) { return sgm::cli::run(argc, argv, std::cout, std::cerr); }
