#include "chainlab/cli_app.hpp"

int main(int argc, char** argv) { return chainlab::run_cli(argc, argv); }
