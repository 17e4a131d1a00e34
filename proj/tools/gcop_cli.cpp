#include "gcop/harness.hpp"

int main(int argc, char** argv) { return gcop::cli_main(argc, argv); }
