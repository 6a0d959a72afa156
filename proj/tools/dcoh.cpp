#include <iostream>
#include <string>
#include <vector>

#include "dcoh/cli.hpp"

int main(int argc, char** argv) { return dcoh::run(std::vector<std::string>(argv + 1, argv + argc), std::cout); }
