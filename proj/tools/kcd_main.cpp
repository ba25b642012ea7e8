#include "kcd/cli.hpp"

int main(int argc, char** argv) {
  return kcd::cli::dispatch(argc, argv);
}
