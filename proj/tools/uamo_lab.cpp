#include "uamo/harness.hpp"

int main(int argc, char** argv) { return uamo::run_cli(argc, argv); }
