#include "commands.hpp"

int main(int argc, char** argv) { return lppls::cli::run(argc, argv); }
