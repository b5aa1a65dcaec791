#include <iostream>

#include "wavelab/cli/dispatch.hpp"

int main(int argc, char** argv) { return wavelab::cli::dispatch(argc, argv, std::cout, std::cerr); }
