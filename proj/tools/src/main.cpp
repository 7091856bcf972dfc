#include "app.hpp"

int main(int argc, char** argv) { return monotile::cli::run(argc, argv); }
