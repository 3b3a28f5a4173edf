#include "msm/cli.hpp"

int main(int argc, char** argv) { return msm::cli::main(argc, argv); }
