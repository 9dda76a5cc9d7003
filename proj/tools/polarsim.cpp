#include "polarsim/experiment.hpp"

int main(int argc, char** argv) { return polarsim::run_cli(argc, argv); }
