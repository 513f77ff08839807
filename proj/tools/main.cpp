#include "nsdm/cli.hpp"

int main(int argc, char** argv) {
  return nsdm::cli::cli_main(argc, argv);
}
