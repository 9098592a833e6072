#include "entroplin/cli_io.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return entroplin::io::dispatch(argc, argv, std::cout, std::cerr);
}
